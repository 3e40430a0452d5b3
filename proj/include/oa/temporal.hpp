#ifndef OA_TEMPORAL_HPP
#define OA_TEMPORAL_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "oa/datetime.hpp"
#include "oa/errors.hpp"
#include "oa/model.hpp"

namespace oa::temporal {

// --- archive index -------------------------------------------------------------

struct Memento {
  DateTime datetime;
  Iri snapshot;
  friend bool operator==(const Memento&, const Memento&) = default;
};

/// Original URI -> archived snapshots, ascending by datetime.
class ArchiveIndex {
public:
  using Entries = std::map<Iri, std::vector<Memento>>;

  ArchiveIndex() = default;

  explicit ArchiveIndex(Entries entries) : entries_(std::move(entries)) {
    for (const auto& [original, mementos] : entries_) {
      if (mementos.empty()) {
        throw InvalidArchiveIndex(original.str() + ": no mementos listed");
      }
      std::set<Iri> snapshots;
      for (std::size_t i = 0; i < mementos.size(); ++i) {
        if (i > 0 && !(mementos[i - 1].datetime < mementos[i].datetime)) {
          throw InvalidArchiveIndex(original.str() + ": datetimes must be strictly increasing");
        }
        if (!snapshots.insert(mementos[i].snapshot).second) {
          throw InvalidArchiveIndex(original.str() + ": snapshot " + mementos[i].snapshot.str() +
                                    " listed twice");
        }
      }
    }
  }

  // {"<original>": [{"datetime": "...Z", "snapshot": "<uri>"}, ...], ...}
  static ArchiveIndex from_json(std::string_view text) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw InvalidArchiveIndex(std::string("archive index is not JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InvalidArchiveIndex("archive index must be a JSON object");
    Entries entries;
    try {
      for (const auto& [original, list] : doc.items()) {
        if (!list.is_array()) throw InvalidArchiveIndex(original + ": expected an array");
        std::vector<Memento> mementos;
        for (const auto& m : list) {
          mementos.push_back(Memento{DateTime::parse_iso8601(m.at("datetime").get<std::string>()),
                                     Iri(m.at("snapshot").get<std::string>())});
        }
        entries.emplace(Iri(original), std::move(mementos));
      }
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArchiveIndex(std::string("malformed memento entry: ") + e.what());
    } catch (const InvalidIri& e) {
      throw InvalidArchiveIndex(e.what());
    } catch (const InvalidDateTime& e) {
      throw InvalidArchiveIndex(e.what());
    }
    return ArchiveIndex(std::move(entries));
  }

  static ArchiveIndex load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArchiveIndex("cannot read archive index " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
  }

  std::string to_json() const {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto& [original, mementos] : entries_) {
      auto& list = doc[original.str()] = nlohmann::ordered_json::array();
      for (const auto& m : mementos) {
        list.push_back({{"datetime", m.datetime.iso8601()}, {"snapshot", m.snapshot.str()}});
      }
    }
    return doc.dump(2) + "\n";
  }

  const std::vector<Memento>* find(const Iri& original) const {
    auto it = entries_.find(original);
    return it == entries_.end() ? nullptr : &it->second;
  }

  const Entries& entries() const noexcept { return entries_; }

private:
  Entries entries_;
};

/// The memento closest in time to `at`; ties go to the earlier memento.
inline Memento resolve_memento(const ArchiveIndex& idx, const Iri& original, const DateTime& at) {
  const auto* list = idx.find(original);
  if (!list) throw UnknownOriginal("no mementos for " + original.str());
  auto after = std::lower_bound(list->begin(), list->end(), at,
                                [](const Memento& m, const DateTime& t) { return m.datetime < t; });
  if (after == list->begin()) return *after;
  auto before = std::prev(after);
  if (after == list->end()) return *before;
  const auto gap_before = at.unix_seconds() - before->datetime.unix_seconds();
  const auto gap_after = after->datetime.unix_seconds() - at.unix_seconds();
  return gap_after < gap_before ? *after : *before;
}

// --- classification ------------------------------------------------------------

enum class Role { Body, Target };

struct RoleKey {
  Role role;
  std::size_t index;  // position in Annotation::targets; 0 for the body
  friend auto operator<=>(const RoleKey&, const RoleKey&) = default;
};

struct Timeless {
  friend bool operator==(const Timeless&, const Timeless&) = default;
};
struct UniformTime {
  DateTime when;
  friend bool operator==(const UniformTime&, const UniformTime&) = default;
};
struct VariedTime {
  std::map<RoleKey, DateTime> marks;
  friend bool operator==(const VariedTime&, const VariedTime&) = default;
};

using TemporalClass = std::variant<Timeless, UniformTime, VariedTime>;

namespace detail {

inline std::optional<DateTime> web_time_mark(const ConstrainedResource& cr) {
  if (cr.constraint.kind != ConstraintKind::WebTime) return std::nullopt;
  return cr.constraint.when;
}

}  // namespace detail

/// Timeless: no `when` anywhere. UniformTime: `when` on the annotation.
/// VariedTime: `when` on WebTime constraints of the body and/or targets.
inline TemporalClass classify(const Annotation& a) {
  std::map<RoleKey, DateTime> marks;
  if (a.body) {
    if (auto cb = std::get_if<ConstrainedBody>(&a.body->value)) {
      if (auto when = detail::web_time_mark(*cb)) marks[{Role::Body, 0}] = *when;
    }
  }
  for (std::size_t i = 0; i < a.targets.size(); ++i) {
    if (auto ct = std::get_if<ConstrainedTarget>(&a.targets[i].value)) {
      if (auto when = detail::web_time_mark(*ct)) marks[{Role::Target, i}] = *when;
    }
  }
  if (a.when && !marks.empty()) {
    throw ConflictingTemporalMarks(a.uri.str() +
                                   " carries both an annotation-level and a per-role when");
  }
  if (a.when) return UniformTime{*a.when};
  if (!marks.empty()) return VariedTime{std::move(marks)};
  return Timeless{};
}

inline std::string describe(const TemporalClass& c) {
  if (std::holds_alternative<Timeless>(c)) return "Timeless";
  if (auto u = std::get_if<UniformTime>(&c)) return "UniformTime " + u->when.iso8601();
  std::string out = "VariedTime";
  for (const auto& [key, when] : std::get<VariedTime>(c).marks) {
    out += key.role == Role::Body ? " body=" : " target[" + std::to_string(key.index) + "]=";
    out += when.iso8601();
  }
  return out;
}

// --- reconstruction --------------------------------------------------------------

namespace detail {

class Reconstructor {
public:
  Reconstructor(const ArchiveIndex& idx, rdf::Graph& provenance) : idx_(idx), prov_(provenance) {}

  // Points `uri` (fragment kept) at the snapshot nearest `at`.
  Iri resolve(const Iri& uri, const DateTime& at) {
    const Iri whole = uri.without_fragment();
    const Memento m = resolve_memento(idx_, whole, at);
    if (m.snapshot == whole) return uri;
    std::string text = m.snapshot.str();
    if (uri.has_fragment()) text += "#" + std::string(uri.fragment());
    Iri resolved(std::move(text));
    prov_.insert(resolved, vocab::dcterms("isVersionOf"), uri);
    return resolved;
  }

  void body(BodyRef& b, const DateTime& at) {
    if (auto rb = std::get_if<RemoteBody>(&b.value)) {
      rb->uri = resolve(rb->uri, at);
    } else if (auto cb = std::get_if<ConstrainedBody>(&b.value)) {
      cb->constrains = resolve(cb->constrains, at);
    }
  }

  void target(TargetRef& t, const DateTime& at) {
    if (auto dt = std::get_if<DirectTarget>(&t.value)) {
      const Iri before = dt->uri;
      dt->uri = resolve(dt->uri, at);
      if (t.is_part_of && *t.is_part_of == before.without_fragment()) {
        t.is_part_of = dt->uri.without_fragment();
      }
    } else {
      auto& ct = std::get<ConstrainedTarget>(t.value);
      ct.constrains = resolve(ct.constrains, at);
    }
  }

private:
  const ArchiveIndex& idx_;
  rdf::Graph& prov_;
};

}  // namespace detail

/// Rebuilds the annotation against archived snapshots: remote body/target
/// IRIs are swapped for the snapshot nearest their datetime, with the original
/// IRI kept as a dcterms:isVersionOf triple. Inline content is untouched.
///
/// In VariedTime annotations a role without its own mark falls back to the
/// annotation's created time, or is left alone when there is none.
inline Annotation reconstruct(const Annotation& a, const ArchiveIndex& idx) {
  const TemporalClass cls = classify(a);
  if (std::holds_alternative<Timeless>(cls)) {
    throw NotTimeAnchored(a.uri.str() + " is a timeless annotation");
  }
  auto when_for = [&](RoleKey key) -> std::optional<DateTime> {
    if (auto u = std::get_if<UniformTime>(&cls)) return u->when;
    const auto& marks = std::get<VariedTime>(cls).marks;
    if (auto it = marks.find(key); it != marks.end()) return it->second;
    return a.created;
  };

  Annotation out = a;
  rdf::Graph provenance;
  detail::Reconstructor r(idx, provenance);
  if (out.body) {
    if (auto at = when_for({Role::Body, 0})) r.body(*out.body, *at);
  }
  for (std::size_t i = 0; i < out.targets.size(); ++i) {
    if (auto at = when_for({Role::Target, i})) r.target(out.targets[i], *at);
  }
  std::sort(out.targets.begin(), out.targets.end(),
            [](const TargetRef& x, const TargetRef& y) { return x.node() < y.node(); });
  out.extra.insert_all(provenance);
  return out;
}

}  // namespace oa::temporal

#endif  // OA_TEMPORAL_HPP
