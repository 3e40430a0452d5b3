// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "oa/constraints.hpp"
#include "oa/fragments.hpp"
#include "oa/model.hpp"
#include "oa/server.hpp"
#include "oa/temporal.hpp"
#include "oa/validation.hpp"
#include "support/data.hpp"
#include "support/samples.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace {

using oa::Iri;
using namespace oa::fragments;
namespace oracle = oa::testing::oracle;

// A criterion either returns normally or throws with the reason.
struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

std::vector<oracle::Row> rows_of(const oa::rdf::Graph& g) {
  std::vector<oracle::Row> rows;
  for (const auto& t : g) rows.push_back(oracle::split_statement(oa::rdf::render_triple(t)));
  return rows;
}

std::vector<oracle::Row> rows_of_lines(const std::string& text) {
  std::vector<oracle::Row> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) rows.push_back(oracle::split_statement(line));
  }
  return rows;
}

// --- 1 --------------------------------------------------------------------------------

std::string fragment_examples() {
  struct Example {
    std::string uri;
    std::optional<std::string> hint;
    FragmentSelector expected;
  };
  const std::vector<Example> examples{
      {"http://www.example.net/foo.png#xywh=160,120,320,240", std::nullopt,
       Spatial{SpatialUnit::Pixel, 160, 120, 320, 240}},
      {"http://www.example.net/foo.mpg#t=npt:10,20", std::nullopt, Temporal{10.0, 20.0}},
      {"http://www.example.net/foo.pdf#page=10&viewrect=20,100,50,60", std::nullopt,
       PdfView{10, Rect{20, 100, 50, 60}}},
      {"http://www.example.net/foo.html#namedSection", std::string("text/html"),
       NamedAnchor{"namedSection"}},
  };
  for (const auto& e : examples) {
    const auto f = parse_fragment(Iri(e.uri), e.hint);
    require(f.base == Iri(e.uri).without_fragment(), e.uri + ": wrong base");
    require(f.selectors.size() == 1 && f.selectors[0] == e.expected, e.uri + ": wrong structure");
    require(serialize_fragment(f).str() == e.uri, e.uri + ": not byte-identical on output");
  }
  return "4 URIs";
}

// --- 2 --------------------------------------------------------------------------------

std::string fragment_round_trip() {
  oa::testing::Random r(1001);
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const auto f = oa::testing::random_fragment_uri(r);
    const Iri text = serialize_fragment(f);
    const auto back = parse_fragment(text, media_type_of(family_of(f.selectors.front())));
    require(back == f, "parse of " + text.str() + " differs");
    require(serialize_fragment(back) == text, "re-serialization of " + text.str() + " differs");
    for (const auto& s : f.selectors) {
      const auto c = canonicalize(s);
      require(canonicalize(c) == c, "canonicalize not idempotent on " + text.str());
    }
  }
  return std::to_string(n) + " cases";
}

// --- 3 --------------------------------------------------------------------------------

std::string sample_goldens() {
  int n = 0;
  for (const auto& [name, build] : oa::testing::golden_samples()) {
    const auto path = oa::testing::data_path("golden/" + name + ".nt");
    const std::string golden = oa::testing::read_file(path);
    const std::string first = oa::rdf::serialize_ntriples_canonical(oa::to_graph(build()));
    const std::string second = oa::rdf::serialize_ntriples_canonical(oa::to_graph(build()));
    require(first == second, name + ": output differs between runs");
    require(first == golden, name + ": output differs from " + path.string());
    const auto report = oa::validation::validate(oa::rdf::parse_ntriples(golden));
    require(!report.has_errors(), name + ": validation errors");
    ++n;
  }
  return std::to_string(n) + " samples";
}

// --- 4 --------------------------------------------------------------------------------

std::string validation_corpus() {
  const auto cases = oa::testing::load_corpus();
  require(cases.size() >= 20, "only " + std::to_string(cases.size()) + " corpus graphs");
  std::set<std::string> seen;
  for (const auto& c : cases) {
    const auto g = oa::rdf::parse_ntriples(c.text);
    auto once = oa::validation::validate(g).codes();
    auto twice = oa::validation::validate(g).codes();
    require(once == twice, c.name + ": not deterministic");
    std::sort(once.begin(), once.end());
    require(once == c.expected, c.name + ": unexpected finding codes");
    seen.insert(once.begin(), once.end());
  }
  for (const char* code : {"E001", "E002", "E003", "E101", "E102", "E201", "W001", "W002", "W101",
                           "W102", "W103"}) {
    require(seen.count(code) == 1, std::string("no corpus graph exercises ") + code);
  }
  return std::to_string(cases.size()) + " graphs";
}

// --- 5 --------------------------------------------------------------------------------

std::string temporal_oracle() {
  using namespace oa::temporal;
  oa::testing::Random r(505);
  const Iri original("http://cnn.com/");
  int queries = 0;
  for (int i = 0; i < 500; ++i) {
    std::set<std::int64_t> stamps_set;
    const int n = r.integer(1, 40);
    const std::int64_t origin = 1300000000;
    while (static_cast<int>(stamps_set.size()) < n) stamps_set.insert(origin + r.integer(0, 5000) * 60);
    const std::vector<std::int64_t> stamps(stamps_set.begin(), stamps_set.end());
    std::vector<Memento> mementos;
    for (std::size_t k = 0; k < stamps.size(); ++k) {
      mementos.push_back({oa::DateTime::from_unix(stamps[k]), Iri("http://s/" + std::to_string(k))});
    }
    const ArchiveIndex idx({{original, mementos}});
    const std::int64_t when = origin + r.integer(-200, 10200) * 30;
    const auto k = oracle::nearest_memento(stamps, when);
    require(resolve_memento(idx, original, oa::DateTime::from_unix(when)) == mementos[k],
            "disagrees with the linear scan at t=" + std::to_string(when));
    ++queries;
  }
  require(classify(oa::testing::timeless_cnn()) == TemporalClass(Timeless{}), "timeless fixture");
  require(classify(oa::testing::uniform_time_sample()) ==
              TemporalClass(UniformTime{oa::testing::at(2011, 5, 3, 10, 0)}),
          "uniform-time fixture");
  const auto varied = classify(oa::testing::varied_time_cnn());
  require(std::holds_alternative<VariedTime>(varied) && std::get<VariedTime>(varied).marks.size() == 2,
          "varied-time fixture");
  return std::to_string(queries) + " queries, 3 fixtures";
}

// --- 6 --------------------------------------------------------------------------------

std::string canonical_vs_isomorphism() {
  oa::testing::Random r(606);
  int same = 0, different = 0;
  for (int i = 0; i < 400; ++i) {
    const auto a = oa::testing::random_ground_graph(r, 10);
    oa::rdf::Graph b;
    switch (r.integer(0, 3)) {
      case 0: {  // the same triples inserted in another order
        std::vector<oa::rdf::Triple> ts(a.begin(), a.end());
        std::shuffle(ts.begin(), ts.end(), r.engine());
        for (auto& t : ts) b.insert(t.subject, t.predicate, t.object);
        break;
      }
      case 1: {  // drop one triple
        b = a;
        if (!a.empty()) {
          auto it = a.begin();
          std::advance(it, r.integer(0, static_cast<int>(a.size()) - 1));
          b.erase(*it);
        }
        break;
      }
      case 2: {  // add one, possibly already present
        b = a;
        b.insert_all(oa::testing::random_ground_graph(r, 1));
        break;
      }
      default: b = oa::testing::random_ground_graph(r, 10); break;
    }
    const bool canonical_equal =
        oa::rdf::serialize_ntriples_canonical(a) == oa::rdf::serialize_ntriples_canonical(b);
    const bool isomorphic = oracle::brute_force_isomorphic(rows_of(a), rows_of(b));
    require(canonical_equal == isomorphic, "canonical equality and isomorphism disagree");
    (isomorphic ? same : different)++;
  }
  require(same > 0 && different > 0, "the generated pairs do not exercise both outcomes");
  return "400 pairs (" + std::to_string(same) + " isomorphic)";
}

// --- 7 --------------------------------------------------------------------------------

std::string percent_encode(const std::string& s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  return out;
}

std::string server_end_to_end() {
  using namespace oa::server;
  const auto index = oa::testing::cnn_archive();
  Service svc(Config::from_json(R"({"listen": "127.0.0.1:0", "base_uri": "http://127.0.0.1/"})"), index, 77);
  httplib::Server http;
  std::ostringstream log;
  mount(http, svc, log);
  const int port = http.bind_to_any_port("127.0.0.1");
  require(port > 0, "cannot bind a loopback port");
  std::thread loop([&] { http.listen_after_bind(); });
  http.wait_until_ready();
  struct Stop {
    httplib::Server& http;
    std::thread& loop;
    ~Stop() {
      http.stop();
      loop.join();
    }
  } stop{http, loop};

  httplib::Client client("127.0.0.1", port);
  const std::string golden = oa::testing::read_file(oa::testing::data_path("golden/properties.nt"));
  const auto input_rows = rows_of_lines(golden);
  auto posted = client.Post("/annotations", golden, "application/n-triples");
  require(posted && posted->status == 201, "ingest did not return 201");
  const std::string location = nlohmann::json::parse(posted->body)["stored"][0]["location"];
  const std::string path = location.substr(location.find('/', 7));

  for (const char* type : {"application/n-triples", "text/turtle"}) {
    auto first = client.Get(path, {{"Accept", type}});
    auto second = client.Get(path, {{"Accept", type}});
    require(first && first->status == 200 && second && second->status == 200,
            std::string("GET as ") + type + " failed");
    require(first->get_header_value("Content-Type") == type, std::string("wrong Content-Type for ") + type);
    require(first->body == second->body, std::string(type) + " output is not byte-stable");
    const auto rows = std::string(type) == "text/turtle"
                          ? oracle::TurtleSubsetReader(first->body).read()
                          : rows_of_lines(first->body);
    require(oracle::brute_force_isomorphic(rows, input_rows),
            std::string(type) + " output is not isomorphic to the input");
  }

  const std::string target = "http://example.org/images/galaxy.jpg";
  auto found = client.Get("/search?target=" + percent_encode(target));
  require(found && found->status == 200, "search failed");
  const auto results = nlohmann::json::parse(found->body)["results"];
  require(results.size() == 1 && results[0] == "http://example.org/annotations/A-1",
          "search did not return the ingested annotation");

  const Iri cnn("http://cnn.com/");
  const auto& mementos = index.entries().at(cnn);
  std::vector<std::int64_t> stamps;
  for (const auto& m : mementos) stamps.push_back(m.datetime.unix_seconds());
  oa::testing::Random r(707);
  for (int i = 0; i < 20; ++i) {
    const auto when = oa::DateTime::from_unix(stamps.front() + r.integer(-86400, 10 * 86400));
    auto gate = client.Get("/timegate/" + percent_encode(cnn.str()), {{"Accept-Datetime", when.rfc1123()}});
    require(gate && gate->status == 302, "timegate did not redirect");
    const auto expected = mementos[oracle::nearest_memento(stamps, when.unix_seconds())].snapshot.str();
    require(gate->get_header_value("Location") == expected,
            "timegate chose " + gate->get_header_value("Location") + ", expected " + expected);
  }
  return "ingest, 2 formats, search, 20 timegate requests";
}

// --- 8 --------------------------------------------------------------------------------

std::string model_round_trip() {
  oa::testing::AnnotationFactory factory(808);
  const int n = 500;
  for (int i = 0; i < n; ++i) {
    const auto a = factory.next();
    require(oa::from_graph(oa::to_graph(a), a.uri) == a, "round trip changed " + a.uri.str());
  }
  return std::to_string(n) + " annotations";
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    std::string name;
    std::function<std::string()> check;
    std::optional<double> limit_seconds;
  };
  const std::vector<Criterion> criteria{
      {1, "fragment grammar examples", fragment_examples, 1.0},
      {2, "fragment round trip", fragment_round_trip, 30.0},
      {3, "sample goldens", sample_goldens, std::nullopt},
      {4, "validation corpus", validation_corpus, std::nullopt},
      {5, "memento oracle and temporal classes", temporal_oracle, 10.0},
      {6, "canonical form vs isomorphism", canonical_vs_isomorphism, 30.0},
      {7, "server end to end", server_end_to_end, 60.0},
      {8, "model round trip", model_round_trip, std::nullopt},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = c.check();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && c.limit_seconds && seconds >= *c.limit_seconds) {
      ok = false;
      detail += ": over the time limit";
    }
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(3);
    line << (ok ? "PASS" : "FAIL") << " " << c.number << " " << c.name << " (" << detail << ", " << seconds
         << " s";
    if (c.limit_seconds) line << " < " << *c.limit_seconds << " s";
    line << ")";
    std::cout << line.str() << std::endl;
    if (!ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
