#include <gtest/gtest.h>

#include "oa/fragments.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace oa::fragments;
using oa::Iri;
namespace oracle = oa::testing::oracle;

namespace {

FragmentUri parse(const std::string& uri, std::optional<std::string_view> hint = {}) {
  return parse_fragment(Iri(uri), hint);
}

std::string roundtrip(const std::string& uri, std::optional<std::string_view> hint = {}) {
  return serialize_fragment(parse(uri, hint)).str();
}

}  // namespace

TEST(Fragments, ImageBox) {
  const std::string uri = "http://www.example.net/foo.png#xywh=160,120,320,240";
  const auto f = parse(uri);
  EXPECT_EQ(f.base, Iri("http://www.example.net/foo.png"));
  ASSERT_EQ(f.selectors.size(), 1u);
  EXPECT_EQ(std::get<Spatial>(f.selectors[0]), (Spatial{SpatialUnit::Pixel, 160, 120, 320, 240}));
  EXPECT_EQ(roundtrip(uri), uri);
}

TEST(Fragments, VideoInterval) {
  const std::string uri = "http://www.example.net/foo.mpg#t=npt:10,20";
  const auto f = parse(uri);
  ASSERT_EQ(f.selectors.size(), 1u);
  EXPECT_EQ(std::get<Temporal>(f.selectors[0]), (Temporal{10.0, 20.0}));
  EXPECT_EQ(roundtrip(uri), uri);
}

TEST(Fragments, PdfViewRect) {
  const std::string uri = "http://www.example.net/foo.pdf#page=10&viewrect=20,100,50,60";
  const auto f = parse(uri);
  ASSERT_EQ(f.selectors.size(), 1u);
  EXPECT_EQ(std::get<PdfView>(f.selectors[0]), (PdfView{10, Rect{20, 100, 50, 60}}));
  EXPECT_EQ(roundtrip(uri), uri);
}

TEST(Fragments, HtmlNamedSection) {
  const std::string uri = "http://www.example.net/foo.html#namedSection";
  const auto f = parse(uri, "text/html");
  ASSERT_EQ(f.selectors.size(), 1u);
  EXPECT_EQ(std::get<NamedAnchor>(f.selectors[0]).name, "namedSection");
  EXPECT_EQ(roundtrip(uri, "text/html"), uri);
  EXPECT_EQ(parse(uri), f);  // no hint needed either
}

TEST(Fragments, NoFragment) {
  EXPECT_TRUE(parse("http://x/y").selectors.empty());
  EXPECT_TRUE(parse("http://x/y#").selectors.empty());
  EXPECT_EQ(serialize_fragment(parse("http://x/y")), Iri("http://x/y"));
}

TEST(Fragments, CanonicalText) {
  EXPECT_EQ(roundtrip("http://x/v#t=10,20"), "http://x/v#t=npt:10,20");
  EXPECT_EQ(roundtrip("http://x/v#t=npt:10"), "http://x/v#t=npt:10");
  EXPECT_EQ(roundtrip("http://x/v#t=,20"), "http://x/v#t=npt:,20");
  EXPECT_EQ(roundtrip("http://x/v#t=010.500,020.00"), "http://x/v#t=npt:10.5,20");
  EXPECT_EQ(roundtrip("http://x/v#t=npt:00:01:05.5,1:00:00"), "http://x/v#t=npt:65.5,3600");
  EXPECT_EQ(roundtrip("http://x/i#xywh=pixel:1,2,3,4"), "http://x/i#xywh=1,2,3,4");
  EXPECT_EQ(roundtrip("http://x/i#xywh=percent:25,25,50,50"), "http://x/i#xywh=percent:25,25,50,50");
  // t comes first whatever the input order
  EXPECT_EQ(roundtrip("http://x/v#id=a&track=b&xywh=1,2,3,4&t=5,6"),
            "http://x/v#t=npt:5,6&xywh=1,2,3,4&track=b&id=a");
  EXPECT_EQ(roundtrip("http://x/v#track=audio%20en"), "http://x/v#track=audio%20en");
  EXPECT_EQ(roundtrip("http://x/t.txt#char=10,10"), "http://x/t.txt#char=10");
  EXPECT_EQ(roundtrip("http://x/t.txt#line=,5"), "http://x/t.txt#line=0,5");
  EXPECT_EQ(roundtrip("http://x/t.txt#char=3,9;length=99,UTF-8"), "http://x/t.txt#char=3,9;length=99,UTF-8");
}

TEST(Fragments, MalformedValuesReportOffsets) {
  struct Case {
    std::string uri;
    std::size_t offset;
  };
  const std::vector<Case> cases{
      {"http://x/v#t=20,10", 13},         // start after end
      {"http://x/v#t=abc", 13},           // not a number
      {"http://x/v#t=10,", 16},           // missing end
      {"http://x/i#xywh=1,2,3", 20},      // three numbers: no comma after the third
      {"http://x/i#xywh=1,2,-3,4", 20},   // negative
      {"http://x/i#xywh=percent:101,0,1,1", 24},
      {"http://x/v#t=1&t=2", 17},         // dimension repeated
      {"http://x/v#t=smpte:1,2", 13},     // unsupported scheme
      {"http://x/d.pdf#page=0", 20},
      {"http://x/t.txt#char=9,3", 20},
  };
  for (const auto& c : cases) {
    try {
      parse(c.uri);
      ADD_FAILURE() << c.uri << " parsed";
    } catch (const oa::FragmentParseError& e) {
      EXPECT_EQ(e.offset(), c.offset) << c.uri << ": " << e.what();
    }
  }
}

TEST(Fragments, MixedFamiliesAreAmbiguous) {
  EXPECT_THROW(parse("http://x/a#t=1&page=2"), oa::AmbiguousFragment);
  // a hint settles it, and here the media grammar then rejects 'page'
  EXPECT_THROW(parse("http://x/a#t=1&page=2", "video/mp4"), oa::FragmentParseError);
}

TEST(Fragments, HintSelectsGrammar) {
  // without a hint this looks like a media fragment
  const auto html = parse("http://x/a.html#t=1", "text/html");
  EXPECT_EQ(std::get<NamedAnchor>(html.selectors[0]).name, "t=1");
  EXPECT_TRUE(std::holds_alternative<Temporal>(parse("http://x/a#t=1").selectors[0]));
  // unknown keys fall back to an anchor
  EXPECT_TRUE(std::holds_alternative<NamedAnchor>(parse("http://x/a#foo=1").selectors[0]));
}

TEST(Fragments, CheckInvariants) {
  const Iri base("http://x/v");
  EXPECT_NO_THROW(check(FragmentUri{base, {Temporal{1.0, 2.0}, Spatial{}}}));
  EXPECT_THROW(check(FragmentUri{base, {Temporal{1.0, 2.0}, Temporal{3.0, 4.0}}}), oa::InvalidSelector);
  EXPECT_THROW(check(FragmentUri{base, {Temporal{1.0, 2.0}, NamedAnchor{"a"}}}), oa::InvalidSelector);
  EXPECT_THROW(check(FragmentUri{base, {TextChar{1, 2, ""}, TextLine{1, 2, ""}}}), oa::InvalidSelector);
  EXPECT_THROW(check(FragmentUri{base, {Temporal{}}}), oa::InvalidSelector);
  EXPECT_THROW(check(FragmentUri{base, {Temporal{5.0, 5.0}}}), oa::InvalidSelector);
  EXPECT_THROW(check(FragmentUri{base, {Spatial{SpatialUnit::Percent, 0, 0, 100.5, 1}}}),
               oa::InvalidSelector);
  EXPECT_THROW(check(FragmentUri{Iri("http://x/v#a"), {}}), oa::InvalidSelector);
}

TEST(Fragments, Canonicalize) {
  EXPECT_EQ(canonicalize(Temporal{10.0, 20.0}), FragmentSelector(Temporal{10.0, 20.0}));
  const FragmentSelector box = Spatial{SpatialUnit::Pixel, 0, 0, 10, 10};
  EXPECT_EQ(canonicalize(box), box);
}

TEST(Fragments, SpatialRegion) {
  EXPECT_EQ(spatial_region(Spatial{SpatialUnit::Percent, 25, 25, 50, 50}, 400, 200),
            (Rect{100, 50, 200, 100}));
  EXPECT_EQ(spatial_region(Spatial{SpatialUnit::Pixel, 160, 120, 320, 240}, 1024, 768),
            (Rect{160, 120, 320, 240}));
  EXPECT_EQ(spatial_region(Spatial{SpatialUnit::Pixel, 900, 700, 320, 240}, 1024, 768),
            (Rect{900, 700, 124, 68}));
  EXPECT_EQ(spatial_region(Spatial{SpatialUnit::Pixel, 2000, 10, 5, 5}, 1024, 768),
            (Rect{1024, 10, 0, 5}));
  EXPECT_THROW(spatial_region(Spatial{}, 0, 10), oa::InvalidSelector);
}

TEST(Fragments, TemporalInterval) {
  EXPECT_EQ(temporal_interval(Temporal{10.0, 20.0}, 60), (Interval{10, 20}));
  EXPECT_EQ(temporal_interval(Temporal{10.0, std::nullopt}, 60), (Interval{10, 60}));
  EXPECT_EQ(temporal_interval(Temporal{std::nullopt, 90.0}, 60), (Interval{0, 60}));
  EXPECT_THROW(temporal_interval(Temporal{70.0, 80.0}, 60), oa::EmptyInterval);
}

TEST(Fragments, OverlapExamples) {
  const FragmentSelector a = Spatial{SpatialUnit::Pixel, 0, 0, 10, 10};
  const FragmentSelector b = Spatial{SpatialUnit::Pixel, 5, 5, 10, 10};
  EXPECT_TRUE(selectors_overlap(a, b));
  EXPECT_FALSE(selectors_overlap(Temporal{0.0, 10.0}, Temporal{10.0, 20.0}));
  EXPECT_TRUE(selectors_overlap(NamedAnchor{"sec1"}, NamedAnchor{"sec1"}));
  EXPECT_FALSE(selectors_overlap(NamedAnchor{"sec1"}, NamedAnchor{"sec2"}));
  EXPECT_THROW(selectors_overlap(a, Temporal{0.0, 1.0}), oa::FamilyMismatch);
  EXPECT_THROW(selectors_overlap(a, Spatial{SpatialUnit::Percent, 0, 0, 10, 10}),
               oa::InvalidSelector);
  EXPECT_TRUE(selectors_overlap(a, Spatial{SpatialUnit::Percent, 0, 0, 10, 10},
                                OverlapContext{100, 100, std::nullopt}));
  EXPECT_TRUE(selectors_overlap(PdfView{3, std::nullopt}, PdfView{3, Rect{0, 0, 1, 1}}));
  EXPECT_FALSE(selectors_overlap(PdfView{3, std::nullopt}, PdfView{4, std::nullopt}));
  // open end against a duration
  EXPECT_FALSE(selectors_overlap(Temporal{30.0, std::nullopt}, Temporal{40.0, 50.0},
                                 OverlapContext{std::nullopt, std::nullopt, 35.0}));
}

// Property: parse is the inverse of serialize on canonical values, and
// canonicalization is idempotent.
TEST(Fragments, RoundTripProperty) {
  oa::testing::Random r(21);
  for (int i = 0; i < 1000; ++i) {
    const auto f = random_fragment_uri(r);
    ASSERT_NO_THROW(check(f));
    const Iri text = serialize_fragment(f);
    const auto hint = media_type_of(family_of(f.selectors.front()));
    const auto back = parse_fragment(text, hint);
    ASSERT_EQ(back, f) << text.str();
    ASSERT_EQ(serialize_fragment(back), text);
    for (const auto& s : f.selectors) {
      const auto c = canonicalize(s);
      ASSERT_EQ(canonicalize(c), c) << text.str();
      ASSERT_EQ(c, s) << text.str();
    }
  }
}

// Property: regions stay inside the image, intervals inside the media.
TEST(Fragments, EvaluationBounds) {
  oa::testing::Random r(22);
  for (int i = 0; i < 500; ++i) {
    const double w = 1 + r.integer(0, 2000), h = 1 + r.integer(0, 2000);
    const bool percent = r.chance();
    const double lim = percent ? 100 : 3000;
    const Spatial s{percent ? SpatialUnit::Percent : SpatialUnit::Pixel, r.number(lim),
                    r.number(lim), r.number(lim), r.number(lim)};
    const Rect out = spatial_region(s, w, h);
    ASSERT_GE(out.x, 0);
    ASSERT_GE(out.y, 0);
    ASSERT_GE(out.w, 0);
    ASSERT_GE(out.h, 0);
    ASSERT_LE(out.x + out.w, w);
    ASSERT_LE(out.y + out.h, h);

    const double duration = 1 + r.integer(0, 600);
    Temporal t;
    if (r.chance(0.8)) t.start = r.number(700);
    if (r.chance(0.8) || !t.start) t.end = t.start.value_or(0) + 0.5 + r.number(300);
    try {
      const Interval iv = temporal_interval(t, duration);
      ASSERT_LE(0, iv.start);
      ASSERT_LT(iv.start, iv.end);
      ASSERT_LE(iv.end, duration);
    } catch (const oa::EmptyInterval&) {
      ASSERT_GE(*t.start, duration);
    }
  }
}

// Property: integer-grid overlap agrees with cell counting; symmetric and
// reflexive on positive-measure selectors.
TEST(Fragments, OverlapAgreesWithGridOracle) {
  oa::testing::Random r(23);
  for (int i = 0; i < 1000; ++i) {
    const int ax = r.integer(0, 12), ay = r.integer(0, 12), aw = r.integer(0, 6), ah = r.integer(0, 6);
    const int bx = r.integer(0, 12), by = r.integer(0, 12), bw = r.integer(0, 6), bh = r.integer(0, 6);
    const FragmentSelector a = Spatial{SpatialUnit::Pixel, double(ax), double(ay), double(aw), double(ah)};
    const FragmentSelector b = Spatial{SpatialUnit::Pixel, double(bx), double(by), double(bw), double(bh)};
    const bool expected =
        oracle::cells_intersect(oracle::cells(ax, ay, aw, ah), oracle::cells(bx, by, bw, bh));
    ASSERT_EQ(selectors_overlap(a, b), expected);
    ASSERT_EQ(selectors_overlap(b, a), expected);
    if (aw > 0 && ah > 0) {
      ASSERT_TRUE(selectors_overlap(a, a));
    }

    const int t0 = r.integer(0, 20), t1 = t0 + r.integer(1, 8);
    const int u0 = r.integer(0, 20), u1 = u0 + r.integer(1, 8);
    const FragmentSelector ta = Temporal{double(t0), double(t1)};
    const FragmentSelector tb = Temporal{double(u0), double(u1)};
    ASSERT_EQ(selectors_overlap(ta, tb), oracle::steps_intersect(t0, t1, u0, u1));
    ASSERT_EQ(selectors_overlap(tb, ta), oracle::steps_intersect(t0, t1, u0, u1));
    ASSERT_TRUE(selectors_overlap(ta, ta));

    // character ranges are half-open positions [start, end)
    const FragmentSelector ca = TextChar{t0, t1, ""};
    const FragmentSelector cb = TextChar{u0, u1, ""};
    ASSERT_EQ(selectors_overlap(ca, cb), oracle::steps_intersect(t0, t1, u0, u1));
  }
}
