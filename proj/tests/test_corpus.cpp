#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "careerpred/corpus.hpp"
#include "oracles.hpp"

using namespace careerpred;
using namespace careerpred::corpus;

namespace {

const char* kHeader = "semester,interest_field,research_field,higher_study_field,core_courses,skills,engaged,contribution_field\n";

// Six masters; DEV requires s1..s7.
const char* kSmallTaxonomy = R"(
field Web Development = DEV
field CyberSecurity = SEC
field Artificial Intelligence = AI
field Software Development = SDE
field Graphic Design = UI / UX
field Data Science = DS
alias WD = Web Development
alias AI = Artificial Intelligence
skills DEV = s1; s2; s3; s4; s5; s6; s7
skills SEC = crypto
skills AI = ml
skills SDE = design
skills UI / UX = figma
skills DS = stats
)";

MasterFieldTaxonomy bundled() { return MasterFieldTaxonomy::load(oracle::source_path("data/taxonomy.txt")); }

SurveyRecord record(std::string interest, std::vector<std::string> skills) {
  SurveyRecord r;
  r.interest_field = std::move(interest);
  r.skills = std::move(skills);
  return r;
}

}  // namespace

TEST(Names, Normalization) {
  EXPECT_EQ(normalize_name("  Mobile   App  Development "), "mobile app development");
  EXPECT_EQ(normalize_name("UI / UX"), normalize_name("ui/ux"));
  EXPECT_EQ(split_list(" a, b ;; c ,", ",;"), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(Delimited, QuotesAndLineEndings) {
  const auto rows = parse_delimited("a,\"b,c\",\"say \"\"hi\"\"\"\r\n1,2,3\n\n", ',');
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"a", "b,c", "say \"hi\""}));
  EXPECT_EQ(rows[1], (std::vector<std::string>{"1", "2", "3"}));
}

TEST(LoadSurvey, ThreeValidRows) {
  const std::string csv = std::string(kHeader) +
                          "3rd,Web Development,,,Data Structure; Algorithms,WD; MAD,Yes,Web apps\n"
                          "5,Cybersecurity,,,Networks,CS;NS,No,\n"
                          "\"8th semester\",Researcher,Artificial Intelligence,,,\"AI, ML\",yes,\n";
  const auto load = parse_survey(csv);
  ASSERT_EQ(load.records.size(), 3u);
  EXPECT_TRUE(load.warnings.empty());
  const auto& a = load.records[0];
  EXPECT_EQ(a.row, 1u);
  EXPECT_EQ(a.semester, 3);
  EXPECT_EQ(a.interest_field, "Web Development");
  EXPECT_EQ(a.core_courses, (std::vector<std::string>{"Data Structure", "Algorithms"}));
  EXPECT_EQ(a.skills, (std::vector<std::string>{"WD", "MAD"}));
  EXPECT_TRUE(a.engaged);
  EXPECT_EQ(a.contribution_field, "Web apps");
  EXPECT_TRUE(a.issues.empty());
  EXPECT_FALSE(load.records[1].contribution_field.has_value());
  EXPECT_EQ(load.records[2].semester, 8);
  EXPECT_EQ(load.records[2].research_field, "Artificial Intelligence");
  EXPECT_EQ(load.records[2].skills, (std::vector<std::string>{"AI", "ML"}));
}

TEST(LoadSurvey, SemesterOutOfRangeIsFlagged) {
  const auto load = parse_survey(std::string(kHeader) + "15,Web Development,,,,WD,No,\n");
  ASSERT_EQ(load.records.size(), 1u);
  EXPECT_FALSE(load.records[0].semester.has_value());
  ASSERT_EQ(load.records[0].issues.size(), 1u);
  EXPECT_EQ(load.records[0].issues[0].column, "semester");
  EXPECT_EQ(load.records[0].issues[0].raw, "15");
}

TEST(LoadSurvey, HeaderOnlyWarns) {
  const auto load = parse_survey(kHeader);
  EXPECT_TRUE(load.records.empty());
  EXPECT_EQ(load.warnings.size(), 1u);
}

TEST(LoadSurvey, Errors) {
  try {
    parse_survey("");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyInput);
  }
  try {
    parse_survey("semester,interest_field,research_field,higher_study_field,core_courses,engaged,contribution_field\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Schema);
    EXPECT_EQ(e.context(), "skills");
  }
  try {
    load_survey("/nonexistent/survey.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
}

TEST(LoadSurvey, ConfigurableColumnsAndDelimiter) {
  CsvFormat fmt;
  fmt.delimiter = '\t';
  fmt.columns.skills = "Skill Set";
  const auto load = parse_survey(
      "semester\tinterest_field\tresearch_field\thigher_study_field\tcore_courses\tSkill Set\tengaged\tcontribution_field\n"
      "2\tData Science\t\t\t\tstats, python\tno\t\n",
      fmt);
  ASSERT_EQ(load.records.size(), 1u);
  EXPECT_EQ(load.records[0].skills, (std::vector<std::string>{"stats", "python"}));
}

TEST(Taxonomy, BundledTableMapsSuggestedFields) {
  const auto tax = bundled();
  EXPECT_EQ(apply_taxonomy(record("Mobile App Development", {"x"}), tax), "DEV");
  EXPECT_EQ(apply_taxonomy(record("Cybersecurity", {"x"}), tax), "SEC");
  EXPECT_EQ(apply_taxonomy(record("MAD", {"x"}), tax), "DEV");
  EXPECT_EQ(apply_taxonomy(record("  ui/ux ", {"x"}), tax), "UI / UX");
  EXPECT_EQ(apply_taxonomy(record("ML", {"x"}), tax), "AI");
  EXPECT_EQ(apply_taxonomy(record("SysA", {"x"}), tax), "SDE");
  EXPECT_EQ(apply_taxonomy(record("Data Science", {"x"}), tax), "DS");
  for (const auto& m : kMasterFields) EXPECT_FALSE(tax.required_skills(std::string(m)).empty()) << m;
}

TEST(Taxonomy, UnmappedFieldCarriesRawString) {
  try {
    apply_taxonomy(record("Underwater Basket Weaving", {"x"}), bundled());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnmappedField);
    EXPECT_EQ(e.context(), "Underwater Basket Weaving");
  }
}

TEST(Taxonomy, DependentQuestionFallback) {
  auto r = record("Researcher", {"x"});
  r.research_field = "Data Science";
  EXPECT_EQ(apply_taxonomy(r, bundled()), "DS");
}

TEST(Taxonomy, ValidationRejectsBadTables) {
  EXPECT_THROW(MasterFieldTaxonomy::parse("field A = DEV\nskills DEV = x\n"), Error);
  EXPECT_THROW(MasterFieldTaxonomy::parse(std::string(kSmallTaxonomy) + "field Web Development = SEC\n"), Error);
  EXPECT_THROW(MasterFieldTaxonomy::parse(std::string(kSmallTaxonomy) + "bogus line\n"), Error);
  EXPECT_NO_THROW(MasterFieldTaxonomy::parse(kSmallTaxonomy));
}

TEST(Mismatch, JaccardExamples) {
  const auto tax = MasterFieldTaxonomy::parse(kSmallTaxonomy);
  EXPECT_DOUBLE_EQ(mismatch_score(record("WD", {"s1", "s2", "s3", "s4", "s5", "s6", "s7"}), tax), 1.0);
  EXPECT_DOUBLE_EQ(mismatch_score(record("WD", {"a", "b"}), tax), 0.0);
  // 2 shared, 3 record-only, 5 required-only.
  EXPECT_DOUBLE_EQ(mismatch_score(record("WD", {"s1", "S2", "x", "y", "z"}), tax), 2.0 / 10.0);
  EXPECT_DOUBLE_EQ(mismatch_score(record("WD", {}), tax), 0.0);
}

TEST(Clean, DropsBelowThresholdAndKeepsProvenance) {
  const auto tax = MasterFieldTaxonomy::parse(kSmallTaxonomy);
  std::vector<SurveyRecord> rows;
  for (int i = 0; i < 7; ++i) rows.push_back(record("Web Development", {"s1", "s2", "s3"}));
  for (int i = 0; i < 3; ++i) rows.push_back(record("Web Development", {"cooking"}));
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].row = i + 1;
  const auto ds = clean(rows, tax, 0.1);
  EXPECT_EQ(ds.documents.size(), 7u);
  EXPECT_EQ(ds.provenance.size(), 10u);
  EXPECT_EQ(ds.dropped(), 3u);
  for (std::size_t i = 7; i < 10; ++i) {
    EXPECT_EQ(ds.provenance[i].action, CleanAction::Dropped);
    EXPECT_EQ(ds.provenance[i].reason, "extensive mismatch");
    EXPECT_EQ(ds.provenance[i].row, i + 1);
  }
}

TEST(Clean, PerfectRecordTextExcludesCoursesAndSemester) {
  const auto tax = MasterFieldTaxonomy::parse(kSmallTaxonomy);
  auto r = record("Web Development", {"s1", "s2", "s3", "s4", "s5", "s6", "s7"});
  r.semester = 4;
  r.core_courses = {"Compilers"};
  r.research_field = "Security";
  const auto ds = clean({r}, tax, 0.5);
  ASSERT_EQ(ds.documents.size(), 1u);
  EXPECT_EQ(ds.documents[0].label, "DEV");
  EXPECT_EQ(ds.documents[0].text, "s1 s2 s3 s4 s5 s6 s7 Web Development Security");
  EXPECT_EQ(ds.documents[0].text.find("Compilers"), std::string::npos);
  EXPECT_EQ(ds.provenance[0].action, CleanAction::Kept);
  EXPECT_DOUBLE_EQ(ds.provenance[0].score, 1.0);
}

TEST(Clean, DropReasonsAndAdjustments) {
  const auto tax = MasterFieldTaxonomy::parse(kSmallTaxonomy);
  auto flagged = record("Web Development", {"s1"});
  flagged.issues.push_back({"semester", "15", "semester outside [1,12]"});
  const auto ds = clean({record("Web Development", {}), record("", {"s1"}), record("Knitting", {"s1"}), flagged}, tax, 0.1);
  EXPECT_EQ(ds.provenance[0].reason, "no skills");
  EXPECT_EQ(ds.provenance[1].reason, "no interest field");
  EXPECT_EQ(ds.provenance[2].reason, "unmapped field: Knitting");
  EXPECT_EQ(ds.provenance[3].action, CleanAction::Adjusted);
  ASSERT_EQ(ds.documents.size(), 1u);
  for (const auto& d : ds.documents) {
    EXPECT_FALSE(d.text.empty());
    EXPECT_FALSE(d.label.empty());
  }
}

TEST(Clean, AllDroppedIsAnError) {
  const auto tax = MasterFieldTaxonomy::parse(kSmallTaxonomy);
  try {
    clean({record("Web Development", {"zzz"})}, tax, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyDataset);
  }
  EXPECT_THROW(clean({record("Web Development", {"s1"})}, tax, 1.5), Error);
}

TEST(Frequencies, FractionsSumToOne) {
  CleanDataset ds;
  for (int i = 0; i < 3; ++i) ds.documents.push_back({"t", "A"});
  ds.documents.push_back({"t", "B"});
  const auto f = label_frequencies(ds);
  EXPECT_EQ(f.at("A").count, 3u);
  EXPECT_DOUBLE_EQ(f.at("A").fraction, 0.75);
  EXPECT_DOUBLE_EQ(f.at("B").fraction, 0.25);

  CleanDataset big;
  const std::vector<int> counts = {9, 4, 11, 7, 10, 3};
  for (std::size_t c = 0; c < counts.size(); ++c)
    for (int i = 0; i < counts[c]; ++i) big.documents.push_back({"t", std::string(kMasterFields[c])});
  double sum = 0.0;
  for (const auto& [_, v] : label_frequencies(big)) sum += v.fraction;
  EXPECT_NEAR(sum, 1.0, 1e-12);

  CleanDataset single;
  single.documents.push_back({"t", "DS"});
  EXPECT_DOUBLE_EQ(label_frequencies(single).at("DS").fraction, 1.0);
  EXPECT_THROW(label_frequencies(CleanDataset{}), Error);
}

TEST(Serialization, DocumentsAndProvenance) {
  const auto tax = MasterFieldTaxonomy::parse(kSmallTaxonomy);
  auto r = record("Web Development", {"s1"});
  r.row = 1;
  const auto ds = clean({r}, tax, 0.0);
  EXPECT_EQ(serialize_documents(ds), "label\ttext\nDEV\ts1 Web Development\n");
  EXPECT_EQ(serialize_provenance(ds).substr(0, 25), "row\taction\tscore\treason\n1");
}
