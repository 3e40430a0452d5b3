// Builders for the reference annotations kept as golden files and shared by
// the unit tests and the acceptance runner.
#pragma once

#include <map>
#include <string>

#include "oa/constraints.hpp"
#include "oa/model.hpp"
#include "oa/temporal.hpp"
#include "oa/uuid.hpp"
#include "oa/vocab.hpp"

namespace oa::testing {

inline Iri ex(const std::string& path) { return Iri("http://example.org/" + path); }
inline Iri foaf(const std::string& local) { return Iri("http://xmlns.com/foaf/0.1/" + local); }

inline DateTime at(int y, unsigned mo, unsigned d, unsigned h, unsigned mi, unsigned s = 0) {
  return DateTime::from_civil(y, mo, d, h, mi, s);
}

// A video annotating an image; nothing but the three core nodes.
inline Annotation baseline_sample() {
  return build_annotation(ex("annotations/A-1"), BodyRef::remote(ex("videos/hubble.mp4")),
                          {TargetRef::direct(ex("images/galaxy.jpg"))});
}

// The baseline plus provenance on every node and a free-form title.
inline Annotation properties_sample() {
  const Iri body = ex("videos/hubble.mp4");
  const Iri target = ex("images/galaxy.jpg");
  AnnotationMeta meta;
  meta.created = at(2011, 4, 12, 9, 30);
  meta.creator = ex("people/alice");
  meta.title = "Hubble footage of the galaxy in this image";
  meta.extra.insert(ex("people/alice"), foaf("name"), rdf::Literal("Alice"));
  meta.extra.insert(body, vocab::dcterms("creator"), ex("people/bob"));
  meta.extra.insert(body, vocab::dcterms("created"), datetime_literal(at(2010, 11, 2, 14, 0)));
  meta.extra.insert(target, vocab::dcterms("creator"), ex("people/carol"));
  meta.extra.insert(target, vocab::dc("format"), rdf::Literal("image/jpeg"));
  return build_annotation(ex("annotations/A-1"), BodyRef::remote(body),
                          {TargetRef::direct(target)}, std::move(meta));
}

// A short text comment carried inside the annotation document.
inline Annotation inline_body_sample() {
  UuidGenerator gen(6);
  AnnotationMeta meta;
  meta.created = at(2011, 4, 12, 10, 15);
  meta.creator = ex("people/alice");
  return build_annotation(ex("annotations/A-6"),
                          BodyRef::inline_content(InlineContent{"I like this image!"}, gen.next()),
                          {TargetRef::direct(ex("images/galaxy.jpg"))}, std::move(meta));
}

// A tweet about a rectangle of an image addressed by a media fragment.
inline Annotation fragment_target_sample() {
  AnnotationMeta meta;
  meta.created = at(2011, 4, 13, 8, 0);
  meta.creator = ex("people/alice");
  return build_annotation(ex("annotations/A-7"),
                          BodyRef::remote(Iri("http://twitter.com/alice/status/1001")),
                          {TargetRef::segment(ex("images/galaxy.jpg#xywh=160,120,320,240"))},
                          std::move(meta));
}

// A tweet about a non-rectangular area described by a published SVG document.
inline Annotation svg_constraint_sample() {
  UuidGenerator gen(8);
  auto ct = constraints::make_constrained_target(
      ex("images/bergen.jpg"), constraints::remote_svg_constraint(ex("constraints/cathedral.svg")),
      gen);
  AnnotationMeta meta;
  meta.created = at(2011, 4, 14, 16, 45);
  meta.creator = ex("people/alice");
  return build_annotation(ex("annotations/A-8"),
                          BodyRef::remote(Iri("http://twitter.com/alice/status/1002")),
                          {TargetRef::constrained(std::move(ct))}, std::move(meta));
}

// A cartoon commenting on the live CNN front page at one moment.
inline Annotation uniform_time_sample() {
  AnnotationMeta meta;
  meta.created = at(2011, 5, 3, 10, 5);
  meta.creator = ex("people/alice");
  meta.when = at(2011, 5, 3, 10, 0);
  return build_annotation(ex("annotations/A-9"), BodyRef::remote(ex("cartoon")),
                          {TargetRef::direct(Iri("http://cnn.com/"))}, std::move(meta));
}

// "This is the front page of CNN": true whatever the page shows.
inline Annotation timeless_cnn() {
  UuidGenerator gen(5);
  return build_annotation(
      ex("annotations/timeless"),
      BodyRef::inline_content(InlineContent{"This is the front page of CNN"}, gen.next()),
      {TargetRef::direct(Iri("http://cnn.com/"))});
}

// Cartoon published a week after the CNN story it mocks.
inline Annotation varied_time_cnn() {
  UuidGenerator gen(7);
  auto body = constraints::make_constrained_body(
      ex("cartoon"), constraints::web_time_constraint(at(2011, 5, 10, 12, 0), gen), gen);
  auto target = constraints::make_constrained_target(
      Iri("http://cnn.com/"), constraints::web_time_constraint(at(2011, 5, 3, 10, 0), gen), gen);
  AnnotationMeta meta;
  meta.created = at(2011, 5, 10, 12, 30);
  meta.creator = ex("people/alice");
  return build_annotation(ex("annotations/varied"), BodyRef::constrained(std::move(body)),
                          {TargetRef::constrained(std::move(target))}, std::move(meta));
}

// Golden name -> builder.
inline std::map<std::string, Annotation (*)()> golden_samples() {
  return {{"baseline", baseline_sample},       {"properties", properties_sample},
          {"inline_body", inline_body_sample},    {"fragment_target", fragment_target_sample},
          {"svg_constraint", svg_constraint_sample}, {"uniform_time", uniform_time_sample}};
}

// Snapshots of the CNN front page and the cartoon.
inline temporal::ArchiveIndex cnn_archive() {
  auto snap = [](const std::string& stamp, const std::string& uri) {
    return temporal::Memento{DateTime::parse_iso8601(stamp), Iri(uri)};
  };
  return temporal::ArchiveIndex({
      {Iri("http://cnn.com/"),
       {snap("2011-05-01T00:00:00Z", "http://archive.example.org/20110501000000/http://cnn.com/"),
        snap("2011-05-03T09:00:00Z", "http://archive.example.org/20110503090000/http://cnn.com/"),
        snap("2011-05-03T12:00:00Z", "http://archive.example.org/20110503120000/http://cnn.com/"),
        snap("2011-05-09T18:30:00Z", "http://archive.example.org/20110509183000/http://cnn.com/")}},
      {ex("cartoon"),
       {snap("2011-05-02T08:00:00Z", "http://archive.example.org/20110502080000/http://example.org/cartoon"),
        snap("2011-05-10T11:00:00Z", "http://archive.example.org/20110510110000/http://example.org/cartoon")}},
  });
}

}  // namespace oa::testing
