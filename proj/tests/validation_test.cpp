#include <gtest/gtest.h>

#include <map>

#include "oa/validation.hpp"
#include "support/data.hpp"
#include "support/samples.hpp"
#include "support/generators.hpp"

using namespace oa::validation;

namespace {

std::vector<std::string> sorted_codes(const ValidationReport& r) {
  auto codes = r.codes();
  std::sort(codes.begin(), codes.end());
  return codes;
}

}  // namespace

TEST(Validation, CorpusMatchesExpectedCodes) {
  const auto corpus = oa::testing::load_corpus();
  ASSERT_GE(corpus.size(), 20u);
  std::set<std::string> covered;
  for (const auto& c : corpus) {
    const auto g = oa::rdf::parse_ntriples(c.text);
    const auto first = validate(g);
    EXPECT_EQ(sorted_codes(first), c.expected) << c.name << "\n" << first.to_text();
    const auto second = validate(g);
    EXPECT_EQ(first.findings, second.findings) << c.name;
    EXPECT_EQ(first.to_text(), second.to_text()) << c.name;
    covered.insert(c.expected.begin(), c.expected.end());
  }
  for (const auto& info : kCodes) {
    EXPECT_TRUE(covered.count(std::string(info.code))) << info.code << " has no corpus case";
  }
}

TEST(Validation, SeverityAndCounts) {
  const auto g = oa::rdf::parse_ntriples(oa::testing::read_file(
      oa::testing::data_path("corpus/e003_bare_blank.nt")));
  const auto r = validate(g);
  EXPECT_EQ(r.checked_annotations, 1u);
  EXPECT_EQ(r.count(Severity::Error), 2u);
  EXPECT_EQ(r.count(Severity::Warning), 2u);
  EXPECT_TRUE(r.has_errors());
  EXPECT_EQ(code_info("W104").severity, Severity::Warning);
  EXPECT_THROW(code_info("X999"), oa::Error);
}

TEST(Validation, ReportFormats) {
  const auto g = oa::rdf::parse_ntriples(oa::testing::read_file(
      oa::testing::data_path("corpus/w001_no_created.nt")));
  const auto r = validate(g);
  EXPECT_EQ(r.to_text(),
            "WARNING W001 <http://example.org/a/1> recommended dcterms:created is missing\n");
  const auto j = r.to_json();
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["severity"], "warning");
  EXPECT_EQ(j[0]["code"], "W001");
  EXPECT_EQ(j[0]["subject"], "http://example.org/a/1");
}

TEST(Validation, FindingsOrderedBySubjectThenCode) {
  const auto g = oa::rdf::parse_ntriples(oa::testing::read_file(
      oa::testing::data_path("corpus/mixed_two_annotations.nt")));
  const auto r = validate(g);
  for (std::size_t i = 1; i < r.findings.size(); ++i) {
    const auto& a = r.findings[i - 1];
    const auto& b = r.findings[i];
    EXPECT_TRUE(std::tie(a.subject, a.code) <= std::tie(b.subject, b.code));
  }
}

TEST(Validation, NoAnnotationsMeansNothingChecked) {
  oa::rdf::Graph g;
  g.insert(oa::Iri("http://example.org/x"), oa::Iri("http://example.org/p"), oa::rdf::Literal("y"));
  const auto r = validate(g);
  EXPECT_EQ(r.checked_annotations, 0u);
  EXPECT_TRUE(r.findings.empty());
}

TEST(Validation, ValidateNodeLooksAtOneAnnotation) {
  const auto g = oa::rdf::parse_ntriples(oa::testing::read_file(
      oa::testing::data_path("corpus/mixed_two_annotations.nt")));
  EXPECT_TRUE(validate_node(g, oa::Iri("http://example.org/a/1")).findings.empty());
  EXPECT_EQ(sorted_codes(validate_node(g, oa::Iri("http://example.org/a/2"))),
            (std::vector<std::string>{"E001", "W001", "W002"}));
}

TEST(Validation, SamplesHaveNoErrors) {
  for (const auto& [name, build] : oa::testing::golden_samples()) {
    const auto r = validate_annotation(build());
    EXPECT_FALSE(r.has_errors()) << name << "\n" << r.to_text();
  }
}

// Property: errors from the graph checker line up with what from_graph
// refuses, for graphs derived from valid annotations by deleting triples.
TEST(Validation, ErrorsPredictMappingFailures) {
  oa::testing::AnnotationFactory factory(51);
  oa::testing::Random r(51);
  int errors = 0;
  for (int i = 0; i < 300; ++i) {
    const auto a = factory.next();
    auto g = oa::to_graph(a);
    std::vector<oa::rdf::Triple> all(g.begin(), g.end());
    for (int k = 0; k < 2; ++k) {
      const auto& t = r.pick(all);
      if (t.predicate != oa::vocab::rdf_type() || oa::rdf::Subject(a.uri) != t.subject) g.erase(t);
    }
    const auto report = validate(g);
    bool mapped = true;
    try {
      oa::from_graph(g, a.uri);
    } catch (const oa::ModelViolation&) {
      mapped = false;
    }
    if (!mapped) {
      ++errors;
      ASSERT_TRUE(report.has_errors()) << oa::rdf::serialize_ntriples_canonical(g);
    }
  }
  EXPECT_GT(errors, 10);
}
