#pragma once

// Seeded synthetic data for demos and tests: a perfectly separable labeled
// corpus and survey CSVs shaped like the questionnaire export. Nothing here
// resembles real student answers beyond the column layout.

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "careerpred/corpus.hpp"
#include "careerpred/numkit.hpp"

namespace careerpred::synthetic {

/// Class c owns keywords "c<c>kw<k>", k < keywords. Every document contains
/// each of its class's keywords once or twice, in shuffled order, so no two
/// classes share a term.
inline corpus::CleanDataset separable_corpus(std::size_t per_class = 20, std::size_t keywords = 5,
                                             std::uint64_t seed = 7) {
  numkit::SeededRng rng(seed);
  corpus::CleanDataset out;
  for (std::size_t c = 0; c < corpus::kMasterFields.size(); ++c) {
    for (std::size_t d = 0; d < per_class; ++d) {
      std::vector<std::string> words;
      for (std::size_t k = 0; k < keywords; ++k) {
        const auto reps = 1 + rng.uniform_int(2);
        for (std::size_t r = 0; r < reps; ++r) words.push_back("c" + std::to_string(c) + "kw" + std::to_string(k));
      }
      const auto perm = numkit::permutation(words.size(), rng);
      std::string text;
      for (auto i : perm) text += (text.empty() ? "" : " ") + words[i];
      out.documents.push_back({text, std::string(corpus::kMasterFields[c])});
      out.source_index.push_back(out.provenance.size());
      out.provenance.push_back({out.provenance.size() + 1, corpus::CleanAction::Kept, {}, 1.0});
    }
  }
  return out;
}

struct SurveyOptions {
  std::size_t rows = 220;
  std::uint64_t seed = 2024;
  /// Skills drawn from the row's own master field.
  std::size_t min_skills = 3;
  std::size_t max_skills = 7;
  /// Chance that each row also lists a skill of some other master field.
  double cross_skill_rate = 0.5;
  /// Share of rows whose skills come entirely from the wrong master field.
  double garbage_rate = 0.05;
  /// Size of the pool of free-text contribution terms, and how many are
  /// drawn per row; raising the pool grows the vocabulary.
  std::size_t filler_pool = 40;
  std::size_t filler_per_row = 2;
};

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

/// Survey CSV with the default column names. Label shares roughly follow a
/// skewed distribution (SDE and DEV most common, UI / UX least).
inline std::string survey_csv(const corpus::MasterFieldTaxonomy& taxonomy, const SurveyOptions& opt = {}) {
  numkit::SeededRng rng(opt.seed);
  const std::vector<std::string> masters(corpus::kMasterFields.begin(), corpus::kMasterFields.end());
  const std::vector<double> weights = {0.17, 0.12, 0.24, 0.16, 0.23, 0.08};
  std::vector<std::vector<std::string>> fields(masters.size());
  for (const auto& f : taxonomy.fields()) {
    for (std::size_t m = 0; m < masters.size(); ++m) {
      if (f.master == masters[m]) fields[m].push_back(f.field);
    }
  }
  const std::vector<std::string> courses = {"Programming and Problem Solving", "Data Structure",
                                            "Database Management System", "Algorithms", "Computer Networks",
                                            "Operating Systems", "Software Engineering", "Artificial Intelligence"};
  std::vector<std::string> filler;
  for (std::size_t i = 0; i < opt.filler_pool; ++i) filler.push_back("topic" + std::to_string(i));

  auto pick = [&](const std::vector<std::string>& v) -> const std::string& { return v[rng.uniform_int(v.size())]; };
  auto draw_master = [&] {
    double u = rng.uniform01();
    for (std::size_t m = 0; m < weights.size(); ++m) {
      if (u < weights[m]) return m;
      u -= weights[m];
    }
    return weights.size() - 1;
  };
  auto skills_of = [&](std::size_t m) { return taxonomy.skill_names().at(masters[m]); };
  auto sample = [&](const std::vector<std::string>& pool, std::size_t k) {
    const auto perm = numkit::permutation(pool.size(), rng);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < std::min(k, pool.size()); ++i) out.push_back(pool[perm[i]]);
    return out;
  };
  auto join = [](const std::vector<std::string>& v, const char* sep) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : sep) + x;
    return s;
  };

  std::ostringstream out;
  out << "semester,interest_field,research_field,higher_study_field,core_courses,skills,engaged,contribution_field\n";
  for (std::size_t r = 0; r < opt.rows; ++r) {
    const auto m = draw_master();
    const auto field = pick(fields[m]);
    const bool garbage = rng.uniform01() < opt.garbage_rate;
    auto source = m;
    if (garbage) source = (m + 1 + rng.uniform_int(masters.size() - 1)) % masters.size();
    const auto k = opt.min_skills + rng.uniform_int(opt.max_skills - opt.min_skills + 1);
    auto skills = sample(skills_of(source), k);
    if (!garbage && rng.uniform01() < opt.cross_skill_rate) {
      const auto other = (m + 1 + rng.uniform_int(masters.size() - 1)) % masters.size();
      skills.push_back(pick(skills_of(other)));
    }
    const bool engaged = rng.uniform01() < 0.6;
    std::vector<std::string> contribution;
    if (engaged) {
      contribution.push_back(field);
      for (const auto& t : sample(filler, opt.filler_per_row)) contribution.push_back(t);
    }
    out << 1 + rng.uniform_int(12) << ',' << csv_cell(field) << ",,," << csv_cell(join(sample(courses, 3), "; "))
        << ',' << csv_cell(join(skills, "; ")) << ',' << (engaged ? "Yes" : "No") << ','
        << csv_cell(join(contribution, " ")) << '\n';
  }
  return out.str();
}

}  // namespace careerpred::synthetic
