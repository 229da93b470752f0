#pragma once

// Survey ingestion, master-field taxonomy, garbage-row handling and the
// cleaned (text, label) dataset.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "careerpred/error.hpp"

namespace careerpred::corpus {

/// The six consolidated career labels, in label-code order.
inline constexpr std::array<std::string_view, 6> kMasterFields = {"AI", "DS", "DEV", "SEC", "SDE", "UI / UX"};

// ---------------------------------------------------------------------------
// String helpers

inline std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

/// Lowercase, collapse whitespace runs, drop spaces around '/' so that
/// "UI/UX" and "ui  /  ux" compare equal.
inline std::string normalize_name(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space && ch != '/' && out.back() != '/') out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

inline std::vector<std::string> split_list(std::string_view cell, std::string_view delimiters) {
  std::vector<std::string> items;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= cell.size(); ++i) {
    if (i == cell.size() || delimiters.find(cell[i]) != std::string_view::npos) {
      auto item = trim(cell.substr(start, i - start));
      if (!item.empty()) items.push_back(std::move(item));
      start = i + 1;
    }
  }
  return items;
}

// ---------------------------------------------------------------------------
// Survey records

struct CellIssue {
  std::string column;
  std::string raw;
  std::string reason;
  friend bool operator==(const CellIssue&, const CellIssue&) = default;
};

struct SurveyRecord {
  std::size_t row = 0;  // 1-based data row (header excluded)
  std::optional<int> semester;
  std::string interest_field;
  std::optional<std::string> research_field;
  std::optional<std::string> higher_study_field;
  std::vector<std::string> core_courses;
  std::vector<std::string> skills;
  bool engaged = false;
  std::optional<std::string> contribution_field;
  std::vector<CellIssue> issues;

  friend bool operator==(const SurveyRecord&, const SurveyRecord&) = default;
};

/// Header names for each questionnaire column.
struct ColumnMapping {
  std::string semester = "semester";
  std::string interest_field = "interest_field";
  std::string research_field = "research_field";
  std::string higher_study_field = "higher_study_field";
  std::string core_courses = "core_courses";
  std::string skills = "skills";
  std::string engaged = "engaged";
  std::string contribution_field = "contribution_field";
};

struct CsvFormat {
  char delimiter = ',';
  std::string list_delimiters = ",;";
  ColumnMapping columns;
};

struct SurveyLoad {
  std::vector<SurveyRecord> records;
  std::vector<std::string> warnings;
};

/// RFC 4180 style reader: quoted cells may contain delimiters, doubled quotes
/// and newlines.
inline std::vector<std::vector<std::string>> parse_delimited(std::string_view text, char delimiter) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool row_has_content = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      row_has_content = true;
    } else if (c == delimiter) {
      row.push_back(std::move(cell));
      cell.clear();
      row_has_content = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (row_has_content || !cell.empty()) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
      }
      row.clear();
      cell.clear();
      row_has_content = false;
    } else {
      cell.push_back(c);
      row_has_content = true;
    }
  }
  if (row_has_content || !cell.empty()) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::optional<int> leading_integer(std::string_view s) {
  auto t = trim(s);
  std::size_t i = 0;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
  if (i == 0) return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + i, value);
  if (ec != std::errc{}) return std::nullopt;
  return value;
}

inline std::optional<bool> parse_yes_no(std::string_view s) {
  const auto n = normalize_name(s);
  if (n == "yes" || n == "y" || n == "true" || n == "1") return true;
  if (n == "no" || n == "n" || n == "false" || n == "0") return false;
  return std::nullopt;
}

inline SurveyLoad parse_survey(std::string_view text, const CsvFormat& format = {}) {
  auto rows = parse_delimited(text, format.delimiter);
  if (rows.empty()) throw Error(ErrorKind::EmptyInput, "survey file is empty");

  const auto& header = rows.front();
  const auto& cols = format.columns;
  auto column_index = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (normalize_name(header[i]) == normalize_name(name)) return i;
    }
    throw Error(ErrorKind::Schema, "survey header is missing required column '" + name + "'", name);
  };
  const std::size_t i_sem = column_index(cols.semester);
  const std::size_t i_int = column_index(cols.interest_field);
  const std::size_t i_res = column_index(cols.research_field);
  const std::size_t i_hs = column_index(cols.higher_study_field);
  const std::size_t i_cc = column_index(cols.core_courses);
  const std::size_t i_sk = column_index(cols.skills);
  const std::size_t i_eng = column_index(cols.engaged);
  const std::size_t i_con = column_index(cols.contribution_field);

  SurveyLoad load;
  if (rows.size() == 1) {
    load.warnings.push_back("survey contains a header row but no data rows");
    return load;
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    SurveyRecord rec;
    rec.row = r;
    auto cell = [&](std::size_t i) -> std::string { return i < cells.size() ? trim(cells[i]) : std::string{}; };
    auto optional_cell = [&](std::size_t i) -> std::optional<std::string> {
      auto v = cell(i);
      if (v.empty()) return std::nullopt;
      return v;
    };
    if (cells.size() != header.size()) {
      rec.issues.push_back({"*", std::to_string(cells.size()) + " cells",
                            "row has " + std::to_string(cells.size()) + " cells, header has " +
                                std::to_string(header.size())});
    }

    const auto sem_raw = cell(i_sem);
    if (!sem_raw.empty()) {
      const auto sem = leading_integer(sem_raw);
      if (!sem) {
        rec.issues.push_back({cols.semester, sem_raw, "not a semester number"});
      } else if (*sem < 1 || *sem > 12) {
        rec.issues.push_back({cols.semester, sem_raw, "semester outside [1,12]"});
      } else {
        rec.semester = *sem;
      }
    }

    rec.interest_field = cell(i_int);
    rec.research_field = optional_cell(i_res);
    rec.higher_study_field = optional_cell(i_hs);
    rec.core_courses = split_list(cell(i_cc), format.list_delimiters);
    rec.skills = split_list(cell(i_sk), format.list_delimiters);
    if (rec.skills.empty()) rec.issues.push_back({cols.skills, cell(i_sk), "no skills listed"});

    const auto eng_raw = cell(i_eng);
    if (auto eng = parse_yes_no(eng_raw)) {
      rec.engaged = *eng;
    } else if (!eng_raw.empty()) {
      rec.issues.push_back({cols.engaged, eng_raw, "expected yes/no"});
    }
    rec.contribution_field = optional_cell(i_con);
    load.records.push_back(std::move(rec));
  }
  return load;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open file", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline SurveyLoad load_survey(const std::string& path, const CsvFormat& format = {}) {
  try {
    return parse_survey(read_text_file(path), format);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    throw Error(e.kind(), std::string(e.what()) + " (" + path + ")", e.context());
  }
}

// ---------------------------------------------------------------------------
// Taxonomy

/// Maps students' suggested fields onto the six master fields and lists the
/// skills each master field requires. Lookups go through normalize_name and
/// then the abbreviation table, so "MAD", "mobile app  development" and
/// "Mobile App Development" all resolve to the same entry.
class MasterFieldTaxonomy {
 public:
  struct FieldEntry {
    std::string field;
    std::string master;
  };

  void add_alias(const std::string& abbreviation, const std::string& canonical) {
    aliases_[normalize_name(abbreviation)] = canonical;
    alias_list_.emplace_back(abbreviation, canonical);
  }

  void add_field(const std::string& field, const std::string& master) {
    const auto key = canonical_key(field);
    if (auto it = field_to_master_.find(key); it != field_to_master_.end() && it->second != master) {
      throw Error(ErrorKind::Config,
                  "suggested field '" + field + "' maps to both " + it->second + " and " + master, field);
    }
    if (!field_to_master_.contains(key)) fields_.push_back({field, master});
    field_to_master_[key] = master;
  }

  void add_skill(const std::string& master, const std::string& skill) {
    auto& names = skill_names_[master];
    if (required_[master].insert(canonical_key(skill)).second) names.push_back(skill);
  }

  /// Throws Config unless the six master fields are exactly the expected set
  /// and each has at least one required skill.
  void validate() const {
    std::set<std::string> expected(kMasterFields.begin(), kMasterFields.end());
    std::set<std::string> targets;
    for (const auto& [_, master] : field_to_master_) targets.insert(master);
    for (const auto& [master, _] : required_) targets.insert(master);
    if (targets != expected) {
      throw Error(ErrorKind::Config, "taxonomy master fields must be exactly AI, DS, DEV, SEC, SDE, UI / UX");
    }
    for (const auto& master : expected) {
      auto it = required_.find(master);
      if (it == required_.end() || it->second.empty()) {
        throw Error(ErrorKind::Config, "master field has no required skills", master);
      }
    }
  }

  /// Normalized name after abbreviation expansion.
  std::string canonical_key(std::string_view name) const {
    const auto n = normalize_name(name);
    if (auto it = aliases_.find(n); it != aliases_.end()) return normalize_name(it->second);
    return n;
  }

  std::optional<std::string> master_of(std::string_view field) const {
    if (auto it = field_to_master_.find(canonical_key(field)); it != field_to_master_.end()) return it->second;
    return std::nullopt;
  }

  const std::set<std::string>& required_skills(const std::string& master) const {
    static const std::set<std::string> none;
    auto it = required_.find(master);
    return it == required_.end() ? none : it->second;
  }

  const std::vector<FieldEntry>& fields() const noexcept { return fields_; }
  const std::map<std::string, std::vector<std::string>>& skill_names() const noexcept { return skill_names_; }
  const std::vector<std::pair<std::string, std::string>>& aliases() const noexcept { return alias_list_; }

  /// Line format, '#' comments:
  ///   alias MAD = Mobile App Development
  ///   field Mobile App Development = DEV
  ///   skills DEV = Web Development; Mobile App Development; ...
  static MasterFieldTaxonomy parse(std::string_view text) {
    MasterFieldTaxonomy tax;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      auto body = trim(line);
      if (body.empty()) continue;
      const auto space = body.find(' ');
      const auto eq = body.find('=');
      if (space == std::string::npos || eq == std::string::npos || eq < space) {
        throw Error(ErrorKind::Config, "malformed taxonomy line", "line " + std::to_string(line_no));
      }
      const auto keyword = body.substr(0, space);
      const auto lhs = trim(std::string_view(body).substr(space + 1, eq - space - 1));
      const auto rhs = trim(std::string_view(body).substr(eq + 1));
      if (lhs.empty() || rhs.empty()) {
        throw Error(ErrorKind::Config, "empty taxonomy entry", "line " + std::to_string(line_no));
      }
      if (keyword == "alias") {
        tax.add_alias(lhs, rhs);
      } else if (keyword == "field") {
        tax.add_field(lhs, rhs);
      } else if (keyword == "skills") {
        for (const auto& s : split_list(rhs, ";")) tax.add_skill(lhs, s);
      } else {
        throw Error(ErrorKind::Config, "unknown taxonomy keyword '" + keyword + "'", "line " + std::to_string(line_no));
      }
    }
    // Fields may precede the aliases that name them; rebuild the keyed map.
    std::map<std::string, std::string> rekeyed;
    for (const auto& f : tax.fields_) rekeyed[tax.canonical_key(f.field)] = f.master;
    tax.field_to_master_ = std::move(rekeyed);
    std::map<std::string, std::set<std::string>> required;
    for (const auto& [master, names] : tax.skill_names_) {
      for (const auto& n : names) required[master].insert(tax.canonical_key(n));
    }
    tax.required_ = std::move(required);
    tax.validate();
    return tax;
  }

  static MasterFieldTaxonomy load(const std::string& path) { return parse(read_text_file(path)); }

 private:
  std::map<std::string, std::string> aliases_;
  std::vector<std::pair<std::string, std::string>> alias_list_;
  std::map<std::string, std::string> field_to_master_;
  std::vector<FieldEntry> fields_;
  std::map<std::string, std::set<std::string>> required_;
  std::map<std::string, std::vector<std::string>> skill_names_;
};

/// Master field owning the student's suggested field. Students who answered
/// "Researcher" or "Higher Study" name their actual field in the dependent
/// question, so those answers are consulted when the interest itself is
/// unmapped.
inline std::string apply_taxonomy(const SurveyRecord& record, const MasterFieldTaxonomy& taxonomy) {
  if (trim(record.interest_field).empty()) {
    throw Error(ErrorKind::Input, "record has no interest field", "row " + std::to_string(record.row));
  }
  if (auto m = taxonomy.master_of(record.interest_field)) return *m;
  for (const auto* dependent : {&record.research_field, &record.higher_study_field}) {
    if (*dependent) {
      if (auto m = taxonomy.master_of(**dependent)) return *m;
    }
  }
  throw Error(ErrorKind::UnmappedField, "suggested field is not in the taxonomy: " + record.interest_field,
              record.interest_field);
}

/// Jaccard overlap of the record's canonical skill set with the required set
/// of its master field.
inline double mismatch_score(const SurveyRecord& record, const MasterFieldTaxonomy& taxonomy) {
  const auto master = apply_taxonomy(record, taxonomy);
  const auto& required = taxonomy.required_skills(master);
  std::set<std::string> have;
  for (const auto& s : record.skills) have.insert(taxonomy.canonical_key(s));
  if (have.empty()) return 0.0;
  std::size_t shared = 0;
  for (const auto& s : have) shared += required.count(s);
  const std::size_t uni = have.size() + required.size() - shared;
  return uni == 0 ? 0.0 : static_cast<double>(shared) / static_cast<double>(uni);
}

// ---------------------------------------------------------------------------
// Cleaning

struct LabeledDocument {
  std::string text;
  std::string label;
  friend bool operator==(const LabeledDocument&, const LabeledDocument&) = default;
};

enum class CleanAction { Kept, Adjusted, Dropped };

inline std::string_view to_string(CleanAction a) {
  switch (a) {
    case CleanAction::Kept: return "kept";
    case CleanAction::Adjusted: return "adjusted";
    case CleanAction::Dropped: return "dropped";
  }
  return "?";
}

struct Provenance {
  std::size_t row = 0;
  CleanAction action = CleanAction::Kept;
  std::string reason;
  double score = 0.0;
};

struct CleanDataset {
  std::vector<LabeledDocument> documents;
  std::vector<Provenance> provenance;
  /// Index into the input records for each kept document.
  std::vector<std::size_t> source_index;

  std::size_t dropped() const {
    return static_cast<std::size_t>(std::count_if(provenance.begin(), provenance.end(),
                                                  [](const Provenance& p) { return p.action == CleanAction::Dropped; }));
  }
};

inline constexpr double kDefaultDropThreshold = 0.05;

inline std::string merged_text(const SurveyRecord& r) {
  std::string text;
  auto append = [&](std::string_view part) {
    auto t = trim(part);
    if (t.empty()) return;
    for (char& c : t) {
      if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    if (!text.empty()) text.push_back(' ');
    text += t;
  };
  for (const auto& s : r.skills) append(s);
  append(r.interest_field);
  if (r.research_field) append(*r.research_field);
  if (r.higher_study_field) append(*r.higher_study_field);
  if (r.contribution_field) append(*r.contribution_field);
  return text;
}

/// Drops rows whose skills extensively mismatch their chosen field (Jaccard
/// below `drop_threshold`), rows with no skills and rows whose field cannot be
/// mapped. Courses and semester never reach the output text.
inline CleanDataset clean(const std::vector<SurveyRecord>& records, const MasterFieldTaxonomy& taxonomy,
                          double drop_threshold = kDefaultDropThreshold) {
  if (!(drop_threshold >= 0.0 && drop_threshold <= 1.0)) {
    throw Error(ErrorKind::Input, "drop threshold must lie in [0,1]", std::to_string(drop_threshold));
  }
  CleanDataset out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    Provenance p{r.row, CleanAction::Dropped, {}, 0.0};
    if (r.skills.empty()) {
      p.reason = "no skills";
    } else if (trim(r.interest_field).empty()) {
      p.reason = "no interest field";
    } else {
      std::optional<std::string> master;
      try {
        master = apply_taxonomy(r, taxonomy);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::UnmappedField) throw;
        p.reason = "unmapped field: " + e.context();
      }
      if (master) {
        p.score = mismatch_score(r, taxonomy);
        if (p.score < drop_threshold) {
          p.reason = "extensive mismatch";
        } else {
          p.action = r.issues.empty() ? CleanAction::Kept : CleanAction::Adjusted;
          for (const auto& issue : r.issues) {
            if (!p.reason.empty()) p.reason += "; ";
            p.reason += issue.column + ": " + issue.reason;
          }
          out.documents.push_back({merged_text(r), *master});
          out.source_index.push_back(i);
        }
      }
    }
    out.provenance.push_back(std::move(p));
  }
  if (out.documents.empty()) {
    throw Error(ErrorKind::EmptyDataset, "every survey row was dropped during cleaning",
                std::to_string(records.size()) + " rows");
  }
  return out;
}

struct LabelFrequency {
  std::size_t count = 0;
  double fraction = 0.0;
};

inline std::map<std::string, LabelFrequency> label_frequencies(const CleanDataset& dataset) {
  if (dataset.documents.empty()) throw Error(ErrorKind::EmptyDataset, "no documents to count");
  std::map<std::string, LabelFrequency> freq;
  for (const auto& d : dataset.documents) ++freq[d.label].count;
  const auto n = static_cast<double>(dataset.documents.size());
  for (auto& [_, f] : freq) f.fraction = static_cast<double>(f.count) / n;
  return freq;
}

/// "label<TAB>text" per document, with a header line.
inline std::string serialize_documents(const CleanDataset& dataset) {
  std::string out = "label\ttext\n";
  for (const auto& d : dataset.documents) out += d.label + "\t" + d.text + "\n";
  return out;
}

inline std::string serialize_provenance(const CleanDataset& dataset) {
  std::ostringstream out;
  out << "row\taction\tscore\treason\n";
  for (const auto& p : dataset.provenance) {
    out << p.row << '\t' << to_string(p.action) << '\t' << p.score << '\t' << p.reason << '\n';
  }
  return out.str();
}

}  // namespace careerpred::corpus
