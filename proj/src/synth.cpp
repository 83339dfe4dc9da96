// Copyright 2026 The sqgen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sqgen/synth.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "sqgen/error.hpp"
#include "sqgen/rng.hpp"

namespace sqgen {
namespace {

const std::vector<std::string> kFields = {
    "computer science", "engineering", "nursing",   "accounting", "finance",
    "business",         "marketing",   "education", "biology",    "chemistry",
    "statistics",       "mathematics", "psychology", "economics", "information systems"};

const std::vector<std::string> kPlaces = {
    "the United States", "Canada",   "the UK",   "Germany", "the EU",
    "Australia",         "California", "Texas", "New York", "Singapore"};

// Provider/recipient family. The label is the template when the candidate
// supplies the object (candidate subject, active voice) or the company
// receives it (company subject, passive voice); otherwise it is NULL.
const std::vector<std::string> kCandidateSubjects = {"you", "applicants", "candidates",
                                                     "the candidate", "new hires"};
const std::vector<std::string> kCompanySubjects = {"we", "our team", "the company",
                                                   "our recruiters", "hr"};
const std::vector<std::string> kModals = {"will", "must", "should", "need to"};
const std::vector<std::pair<std::string, std::string>> kVerbs = {
    {"provide", "provided"}, {"give", "given"}, {"send", "sent"}, {"show", "shown"}};

const std::map<TemplateId, std::vector<std::string>> kCompositionalObjects = {
    {TemplateId::kWorkAuth,
     {"work authorization documents", "employment eligibility paperwork", "work permit records"}},
    {TemplateId::kEducation, {"{Degree} documentation", "{Degree} transcripts", "{Degree} records"}},
    {TemplateId::kLanguage,
     {"{SpokenLanguage} proficiency results", "{SpokenLanguage} test scores",
      "{SpokenLanguage} assessment records"}},
    {TemplateId::kCredential,
     {"{Credential} documentation", "{Credential} records", "proof of {Credential}"}},
    {TemplateId::kTools,
     {"{ToolSkill} work samples", "{ToolSkill} portfolio materials", "{ToolSkill} project records"}},
};

struct Rendered {
  std::string text;
  std::vector<std::string> entity_ids;  // in slot order
};

std::optional<EntityType> slot_type(std::string_view slot) {
  return parse_entity_type(slot);
}

std::string surface_text(const Entity& e, Rng& rng) {
  const auto canonical = tokenize(e.canonical);
  const bool canonical_ok =
      std::find(e.surfaces.begin(), e.surfaces.end(), canonical) != e.surfaces.end();
  if (canonical_ok && rng.bernoulli(0.5)) return e.canonical;
  return join(rng.pick(e.surfaces));
}

class Renderer {
 public:
  Renderer(const Taxonomy& taxonomy, Rng& rng) : rng_(rng) {
    for (auto type : {EntityType::kDegree, EntityType::kToolSkill, EntityType::kSpokenLanguage,
                      EntityType::kCredential}) {
      by_type_[type] = taxonomy.of_type(type);
    }
  }

  Rendered render(std::string_view pattern) {
    Rendered out;
    std::size_t i = 0;
    while (i < pattern.size()) {
      if (pattern[i] != '{') {
        out.text.push_back(pattern[i++]);
        continue;
      }
      const auto close = pattern.find('}', i);
      const auto slot = pattern.substr(i + 1, close - i - 1);
      i = close + 1;
      if (slot == "n") {
        out.text += std::to_string(1 + rng_.below(10));
      } else if (slot == "field") {
        out.text += rng_.pick(kFields);
      } else if (slot == "place") {
        out.text += rng_.pick(kPlaces);
      } else {
        const auto type = slot_type(slot);
        const auto& pool = by_type_.at(*type);
        const Entity* e = rng_.pick(pool);
        // Two slots of one type in a pattern name two different entities.
        for (int tries = 0; tries < 8 && std::find(out.entity_ids.begin(), out.entity_ids.end(), e->id) !=
                                             out.entity_ids.end();
             ++tries) {
          e = rng_.pick(pool);
        }
        out.text += surface_text(*e, rng_);
        out.entity_ids.push_back(e->id);
      }
    }
    return out;
  }

 private:
  Rng& rng_;
  std::map<EntityType, std::vector<const Entity*>> by_type_;
};

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string compositional_pattern(TemplateId family, bool template_cell, Rng& rng) {
  const bool candidate_subject = rng.bernoulli(0.5);
  // template iff candidate==active
  const bool active = template_cell ? candidate_subject : !candidate_subject;
  const auto& subject = candidate_subject ? rng.pick(kCandidateSubjects) : rng.pick(kCompanySubjects);
  const auto& modal = rng.pick(kModals);
  const auto& verb = rng.pick(kVerbs);
  const auto& object = rng.pick(kCompositionalObjects.at(family));
  return subject + " " + modal + " " + (active ? verb.first : "be " + verb.second) + " " + object;
}

class SentenceMaker {
 public:
  SentenceMaker(const SynthConfig& config, Rng& rng)
      : config_(config), rng_(rng), renderer_(config.taxonomy, rng) {}

  // A sentence labelled `gold`, decorated with optional prefix/suffix.
  Rendered make(TemplateId gold) {
    std::string pattern;
    if (gold != TemplateId::kSponsorship && rng_.bernoulli(config_.compositional_share)) {
      if (gold == TemplateId::kNull) {
        const auto it = std::next(kCompositionalObjects.begin(),
                                  static_cast<long>(rng_.below(kCompositionalObjects.size())));
        pattern = compositional_pattern(it->first, false, rng_);
      } else {
        pattern = compositional_pattern(gold, true, rng_);
      }
    } else if (gold == TemplateId::kNull) {
      pattern = rng_.pick(config_.phrases.distractors);
    } else {
      pattern = rng_.pick(config_.phrases.patterns.at(gold));
    }

    const auto& ph = config_.phrases;
    if (!ph.prefixes.empty() && rng_.bernoulli(0.3)) pattern = rng_.pick(ph.prefixes) + " " + pattern;
    if (!ph.suffixes.empty() && rng_.bernoulli(0.3)) pattern += " " + rng_.pick(ph.suffixes);
    auto r = renderer_.render(pattern);
    r.text = capitalize(std::move(r.text));
    if (rng_.bernoulli(0.5)) r.text += ".";
    return r;
  }

 private:
  const SynthConfig& config_;
  Rng& rng_;
  Renderer renderer_;
};

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

PhraseBank default_phrase_bank() {
  PhraseBank b;
  b.patterns[TemplateId::kWorkAuth] = {
      "must be legally authorized to work in {place}",
      "candidates must be authorized to work in {place} without restriction",
      "applicants must have valid work authorization for {place}",
      "you must be eligible to work in {place} on a full-time basis",
      "proof of eligibility to work in {place} is required",
      "are you legally permitted to work in {place}",
      "must possess a valid work permit for {place}",
      "applicants must be able to provide proof of employment eligibility",
      "only candidates with the right to work in {place} will be considered",
      "must hold permanent residency or citizenship in {place}",
      "legal authorization to work in {place} is a condition of employment",
      "you must currently have unrestricted work rights in {place}",
  };
  b.patterns[TemplateId::kSponsorship] = {
      "we are unable to sponsor employment visas for this position",
      "visa sponsorship is available for qualified candidates",
      "this role is not eligible for visa sponsorship",
      "will you now or in the future require sponsorship for employment visa status",
      "the company will sponsor H-1B visas for the right candidate",
      "candidates requiring sponsorship now or in the future will not be considered",
      "we do not offer immigration sponsorship at this time",
      "sponsorship for work visas is not provided",
      "relocation and visa support are available",
      "we can transfer existing visas but cannot file new petitions",
      "applicants who need an employer-sponsored visa are welcome to apply",
      "green card sponsorship may be offered after one year",
  };
  b.patterns[TemplateId::kEducation] = {
      "{Degree} in {field} required",
      "a {Degree} in {field} or a related field",
      "must have completed a {Degree}",
      "{Degree} preferred",
      "minimum of a {Degree} from an accredited institution",
      "candidates should hold a {Degree} in {field}",
      "requires a {Degree} or equivalent practical experience",
      "{Degree} with coursework in {field}",
      "education: {Degree} in {field}",
      "you have earned a {Degree}",
      "completion of a {Degree} program is mandatory",
      "a {Degree} is strongly preferred for this role",
  };
  b.patterns[TemplateId::kLanguage] = {
      "fluency in {SpokenLanguage} is required",
      "must be able to speak {SpokenLanguage} and {SpokenLanguage}",
      "bilingual in {SpokenLanguage} and {SpokenLanguage} preferred",
      "professional working proficiency in {SpokenLanguage}",
      "strong written and verbal {SpokenLanguage} communication skills",
      "ability to read and write {SpokenLanguage} fluently",
      "native or near-native {SpokenLanguage} speaker",
      "conversational {SpokenLanguage} is a plus",
      "you can communicate with customers in {SpokenLanguage}",
      "must be fluent in {SpokenLanguage}",
      "{SpokenLanguage} language skills are essential",
  };
  b.patterns[TemplateId::kCredential] = {
      "active {Credential} required",
      "must hold a current {Credential}",
      "{Credential} preferred",
      "valid {Credential} is required at time of hire",
      "candidates must obtain {Credential} within six months of hire",
      "current {Credential} in good standing",
      "holds an active {Credential} or equivalent",
      "{Credential} or willingness to obtain",
      "possession of a valid {Credential}",
      "certification: {Credential}",
      "must maintain {Credential} throughout employment",
  };
  b.patterns[TemplateId::kTools] = {
      "{n}+ years of experience with {ToolSkill}",
      "{n}+ years experience in {ToolSkill} and {ToolSkill}",
      "proficiency in {ToolSkill} is required",
      "hands-on experience using {ToolSkill}",
      "strong knowledge of {ToolSkill} and {ToolSkill}",
      "experience building applications with {ToolSkill}",
      "advanced {ToolSkill} skills",
      "working knowledge of {ToolSkill}",
      "expert-level {ToolSkill} proficiency",
      "familiarity with {ToolSkill} or similar tools",
      "demonstrated ability to use {ToolSkill}",
      "you have shipped production code in {ToolSkill}",
  };
  b.distractors = {
      "we provide bachelor party supplies for every occasion",
      "our clients include European and {SpokenLanguage} companies",
      "we are a fast-growing company headquartered in {place}",
      "our mission is to make {field} accessible to everyone",
      "we offer competitive salary and comprehensive benefits",
      "enjoy flexible hours and a generous vacation policy",
      "our {ToolSkill} user group meets every month",
      "we partner with {Degree} programs at local universities",
      "tuition reimbursement is available for employees pursuing a {Degree}",
      "the team recently migrated its platform to {ToolSkill}",
      "our office serves {SpokenLanguage} speaking communities",
      "we sponsor local charity runs and community events",
      "you will work alongside a talented and friendly team",
      "free snacks and coffee are available in the office",
      "this is a great opportunity to grow your career",
      "we value diversity and inclusion in everything we do",
      "our company was founded in {place} over {n} years ago",
      "we host a {SpokenLanguage} cultural festival every spring",
      "the company pays {Credential} exam fees as a perk",
      "join us and help shape the future of {field}",
      "our product integrates with {ToolSkill} out of the box",
      "we are an equal opportunity employer",
      "remote work options are available",
      "the position reports to the regional director",
      "responsibilities include managing daily operations",
      "you will collaborate with cross-functional partners",
      "apply today to join our award-winning team",
      "our customers range from startups to large enterprises",
      "we celebrate team wins with quarterly offsites",
      "the role involves occasional travel to {place}",
      "health dental and vision insurance are included",
      "employees receive {n} weeks of paid parental leave",
      "our {field} research lab publishes regularly",
      "we have offices in {place} and {place}",
      "benefits include a {n} percent retirement match",
      "our authorized reseller network spans {n} countries",
      "we accept visa and mastercard at all store locations",
      "our work culture encourages continuous learning",
      "the hiring process includes two interviews",
  };
  b.prefixes = {"required:", "preferred:", "ideally", "note:", "important:", "in addition", "also"};
  b.suffixes = {"for this role", "for this position", "at all times", "as needed",
                "in our {place} office", "on day one"};
  return b;
}

PreferenceFn interaction_preference(std::uint64_t seed, double p_high, double p_low,
                                    double preferred_share) {
  return [=](const JobFeatures& features, const ScreeningQuestion& q) {
    const auto it = features.find("industry");
    const std::string industry = it == features.end() ? std::string() : it->second;
    const auto h = mix(seed ^ fnv1a64(industry) ^ mix(static_cast<std::uint64_t>(q.tmpl)));
    const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    return u < preferred_share ? p_high : p_low;
  };
}

void SynthConfig::validate() const {
  if (sentences_per_template.total() == 0) throw InvalidArgument("sentence counts must be positive");
  if (jobs.total() == 0) throw InvalidArgument("job counts must be positive");
  if (min_question_sentences == 0 || min_question_sentences > max_question_sentences ||
      min_filler_sentences > max_filler_sentences) {
    throw InvalidArgument("invalid sentences-per-job range");
  }
  if (!(compositional_share >= 0.0 && compositional_share <= 1.0)) {
    throw InvalidArgument("compositional_share must be in [0, 1]");
  }
  if (job_schema.features.empty()) throw InvalidArgument("job feature schema is empty");
  for (const auto& f : job_schema.features) {
    if (f.values.empty()) throw InvalidArgument("job feature '" + f.name + "' has no values");
  }
  if (phrases.distractors.empty()) throw InvalidArgument("empty phrase bank for template NULL");
  std::set<std::string> slots;
  auto collect = [&](const std::string& p) {
    std::size_t i = 0;
    while ((i = p.find('{', i)) != std::string::npos) {
      const auto close = p.find('}', i);
      if (close == std::string::npos) throw InvalidArgument("unterminated slot in pattern: " + p);
      slots.insert(p.substr(i + 1, close - i - 1));
      i = close;
    }
  };
  for (auto t : kAllTemplates) {
    if (t == TemplateId::kNull) continue;
    const auto it = phrases.patterns.find(t);
    if (it == phrases.patterns.end() || it->second.empty()) {
      throw InvalidArgument("empty phrase bank for template " + std::string(template_name(t)));
    }
    for (const auto& p : it->second) collect(p);
  }
  for (const auto& p : phrases.distractors) collect(p);
  for (const auto& p : phrases.prefixes) collect(p);
  for (const auto& p : phrases.suffixes) collect(p);
  if (compositional_share > 0.0) {
    for (const auto& [t, objs] : kCompositionalObjects) {
      for (const auto& o : objs) collect(o);
    }
  }
  for (const auto& s : slots) {
    if (s == "n" || s == "field" || s == "place") continue;
    const auto type = parse_entity_type(s);
    if (!type) throw InvalidArgument("unknown slot {" + s + "}");
    if (taxonomy.of_type(*type).empty()) {
      throw InvalidArgument("taxonomy has no entity of type " + s);
    }
  }
}

CorpusBundle gen_synthetic_corpus(const SynthConfig& config) {
  config.validate();
  const PreferenceFn preference = config.preference ? config.preference : interaction_preference(config.seed);
  Rng rng(config.seed);
  SentenceMaker maker(config, rng);
  CorpusBundle out;
  out.taxonomy = config.taxonomy;

  // Labeled sentences: exact per-class counts, shuffled within each split.
  auto make_split = [&](std::size_t per_template, std::vector<LabeledSentence>& dst) {
    for (auto t : kAllTemplates) {
      for (std::size_t i = 0; i < per_template; ++i) dst.push_back({maker.make(t).text, t});
    }
    rng.shuffle(std::span<LabeledSentence>(dst));
  };
  make_split(config.sentences_per_template.train, out.sentences.train);
  make_split(config.sentences_per_template.test, out.sentences.test);
  make_split(config.sentences_per_template.validation, out.sentences.validation);

  // Job postings and the feedback their posters would give.
  std::int64_t clock = config.start_timestamp;
  std::size_t job_counter = 0;
  auto make_jobs = [&](std::size_t count, std::vector<JobPosting>& jobs, std::vector<FeedbackTriple>& feedback) {
    for (std::size_t j = 0; j < count; ++j) {
      JobPosting job;
      job.id = "job-" + std::to_string(++job_counter);
      for (const auto& f : config.job_schema.features) job.features[f.name] = rng.pick(f.values);
      const auto tg = job.features.count("title_group") ? job.features["title_group"] : std::string("associate");
      const auto sen = job.features.count("seniority") ? job.features["seniority"] : std::string();
      job.title = capitalize(sen.empty() ? tg : sen + " " + tg);

      std::vector<std::string> lines;
      const auto fillers = config.min_filler_sentences +
                           rng.below(config.max_filler_sentences - config.min_filler_sentences + 1);
      const auto questions = config.min_question_sentences +
                             rng.below(config.max_question_sentences - config.min_question_sentences + 1);
      const std::size_t intro = fillers / 2;
      for (std::size_t i = 0; i < intro; ++i) lines.push_back(maker.make(TemplateId::kNull).text);
      lines.push_back("Requirements:");
      std::vector<ScreeningQuestion> gold;
      for (std::size_t i = 0; i < questions; ++i) {
        const auto t = template_from_index(1 + rng.below(kNumTemplates - 1));
        const auto r = maker.make(t);
        lines.push_back("- " + r.text);
        if (takes_parameter(t)) {
          for (const auto& id : r.entity_ids) gold.push_back({t, id});
        } else {
          gold.push_back({t, std::nullopt});
        }
      }
      lines.push_back("Benefits:");
      for (std::size_t i = intro; i < fillers; ++i) lines.push_back("- " + maker.make(TemplateId::kNull).text);
      for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) job.body += '\n';
        job.body += lines[i];
      }

      std::set<ScreeningQuestion> seen;
      for (const auto& q : gold) {
        if (!seen.insert(q).second) continue;
        const double p = std::clamp(preference(job.features, q), 0.0, 1.0);
        FeedbackTriple fb{job.id, q.tmpl, q.parameter,
                          rng.bernoulli(p) ? FeedbackLabel::kAccepted : FeedbackLabel::kRejected, clock++};
        feedback.push_back(std::move(fb));
      }
      jobs.push_back(std::move(job));
    }
  };
  make_jobs(config.jobs.train, out.jobs.train, out.feedback.train);
  make_jobs(config.jobs.test, out.jobs.test, out.feedback.test);
  make_jobs(config.jobs.validation, out.jobs.validation, out.feedback.validation);
  return out;
}

std::vector<LabeledSentence> gen_mention_sentences(const SynthConfig& config, std::size_t per_template,
                                                   std::uint64_t seed) {
  SynthConfig plain = config;
  plain.compositional_share = 0.0;
  plain.validate();
  Rng rng(seed);
  SentenceMaker maker(plain, rng);
  std::vector<LabeledSentence> out;
  for (auto t : kAllTemplates) {
    for (std::size_t i = 0; i < per_template; ++i) out.push_back({maker.make(t).text, t});
  }
  rng.shuffle(std::span<LabeledSentence>(out));
  return out;
}

}  // namespace sqgen
