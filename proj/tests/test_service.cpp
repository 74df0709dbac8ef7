#include <doctest.h>

#include <future>

#include "pareto_mall/service.hpp"
#include "support/fixtures.hpp"
#include "support/running_server.hpp"

using namespace pareto_mall;
using nlohmann::json;

namespace {

json s1_request(const char* algorithm = "bnl", int limit = 10) {
  return {{"origin", {{"lat", 41.502744}, {"lng", -81.502225}}},
          {"selected_facilities", json::array()},
          {"algorithm", algorithm},
          {"limit", limit}};
}

std::vector<std::string> entry_codes(const QueryResponse& r) {
  std::vector<std::string> out;
  for (const auto& e : r.entries) out.push_back(e.code);
  return out;
}

std::set<std::string> issue_fields(const json& body) {
  std::set<std::string> out;
  for (const auto& f : body["fields"]) out.insert(f["field"].get<std::string>());
  return out;
}

}  // namespace

TEST_CASE("parse_query_request defaults and validation") {
  const QueryRequest req = parse_query_request({{"origin", {{"lat", 41.0}, {"lng", -81.0}}}});
  CHECK(req.origin == GeoPoint{41.0, -81.0});
  CHECK(req.algorithm == Algorithm::Sfs);
  CHECK(req.limit == 10);
  CHECK(req.selected_facilities.empty());
  CHECK_FALSE(req.include_food_court);

  try {
    parse_query_request({{"origin", {{"lat", 95.0}}},
                         {"algorithm", "bbs"},
                         {"limit", 0},
                         {"selected_facilities", {3, 15}},
                         {"include_food_court", "yes"}});
    FAIL("expected a request error");
  } catch (const RequestError& e) {
    std::set<std::string> fields;
    for (const auto& i : e.issues()) fields.insert(i.field);
    CHECK(fields == std::set<std::string>{"origin.lat", "origin.lng", "algorithm", "limit",
                                          "selected_facilities", "include_food_court"});
  }
  CHECK_THROWS_AS(parse_query_request(json::array()), RequestError);
  CHECK_THROWS_AS(parse_query_request({{"origin", {{"lat", 1}, {"lng", 1}}}, {"limit", 101}}),
                  RequestError);
  CHECK_THROWS_AS(
      parse_query_request({{"origin", {{"lat", 1}, {"lng", 1}}}, {"selected_facilities", {2, 2}}}),
      RequestError);
}

TEST_CASE("handle_query on the five-mall fixture from S1") {
  MallService service;
  service.load(fixtures::table2());

  const QueryResponse r = service.handle_query(parse_query_request(s1_request()));
  // Distance is a dimension, so OH3 (0.9 km away) is no longer dominated by OH4.
  CHECK(entry_codes(r) == std::vector<std::string>{"OH1", "OH3", "OH2", "OH4", "OH5"});
  CHECK_FALSE(r.divergence);
  CHECK(r.algorithm == "bnl");
  CHECK(r.entries[0].rank == 1);
  CHECK(r.entries[0].distance_km == 0.0);
  CHECK(r.entries[0].probability == 0.50);
  CHECK(r.entries[1].probability == 0.61);
  CHECK(r.entries[3].probability == 0.70);
  CHECK(r.elapsed_ms >= 0.0);
  for (std::size_t i = 1; i < r.entries.size(); ++i) {
    CHECK(r.entries[i - 1].distance_km <= r.entries[i].distance_km);
  }

  SUBCASE("limit 1") {
    const QueryResponse one = service.handle_query(parse_query_request(s1_request("sfs", 1)));
    REQUIRE(one.entries.size() == 1);
    CHECK(one.entries[0].rank == 1);
    CHECK(one.entries[0].code == "OH1");
  }
  SUBCASE("every algorithm gives the same response") {
    for (const char* a : {"oracle", "sfs", "dnc"}) {
      const QueryResponse other = service.handle_query(parse_query_request(s1_request(a)));
      CHECK(entry_codes(other) == entry_codes(r));
      CHECK_FALSE(other.divergence);
    }
  }
  SUBCASE("facility selections add dimensions and report counts") {
    json body = s1_request("dnc");
    body["selected_facilities"] = {0, 1};
    body["include_food_court"] = true;
    const QueryResponse f = service.handle_query(parse_query_request(body));
    CHECK_FALSE(f.divergence);
    for (const auto& e : f.entries) REQUIRE(e.selected_facility_counts.size() == 2);
  }
}

TEST_CASE("responses are deterministic apart from timing") {
  MallService service;
  service.load(generate_synthetic_dataset(90, 42));
  json a = to_json(service.handle_query(parse_query_request(s1_request("sfs"))));
  json b = to_json(service.handle_query(parse_query_request(s1_request("sfs"))));
  a.erase("elapsed_ms");
  b.erase("elapsed_ms");
  CHECK(a == b);
}

TEST_CASE("entries are mutually non-dominating under the constructed spec") {
  MallService service;
  service.load(generate_synthetic_dataset(90, 9));
  json body = s1_request("bnl", 100);
  body["selected_facilities"] = {4, 7, 12};
  const QueryRequest req = parse_query_request(body);
  const QueryResponse r = service.handle_query(req);
  CHECK_FALSE(r.divergence);

  const auto dataset = service.snapshot();
  const QuerySpec spec = make_default_spec(req.origin, req.selected_facilities, false, 100);
  const DistanceMatrix m = build_distance_matrix(req.origin, *dataset, GreatCircleProvider{});
  std::vector<QueryPoint> returned;
  for (const QueryPoint& p : project(*dataset, spec, m)) {
    for (const auto& e : r.entries) {
      if (e.code == p.code) returned.push_back(p);
    }
  }
  REQUIRE(returned.size() == r.entries.size());
  for (const auto& x : returned) {
    for (const auto& y : returned) CHECK_FALSE(dominates(x, y, spec));
  }
}

TEST_CASE("list_malls") {
  MallService service;
  CHECK_THROWS_AS(service.list_malls(), ServiceUnavailable);
  CHECK(service.malls_endpoint().status == 503);
  CHECK(service.health_endpoint().status == 503);
  CHECK(service.query_endpoint(s1_request().dump()).status == 503);

  service.load(fixtures::table2());
  const auto malls = service.list_malls();
  REQUIRE(malls.size() == 5);
  CHECK(malls[0].code == "OH1");
  CHECK(malls[0].lat == 41.502744);

  service.load(generate_synthetic_dataset(90, 42));
  const auto synthetic = service.list_malls();
  CHECK(synthetic.size() == 90);
  CHECK(synthetic[1].code == "OH2");
  CHECK(synthetic[9].code == "OH10");
}

TEST_CASE("endpoint status codes") {
  MallService service;
  service.load(fixtures::table2());
  CHECK(service.query_endpoint("{not json").status == 400);
  CHECK(service.query_endpoint(s1_request("bbs").dump()).status == 400);
  const HttpReply bad_origin =
      service.query_endpoint(R"({"origin": {"lat": 123.0, "lng": -81.5}})");
  CHECK(bad_origin.status == 400);
  CHECK(issue_fields(bad_origin.body) == std::set<std::string>{"origin.lat"});
  CHECK(service.health_endpoint().status == 200);
}

TEST_CASE("HTTP routes") {
  MallService service;
  service.load(fixtures::table2());
  fixtures::RunningServer server(service);
  auto client = server.client();

  const auto health = client.Get("/healthz");
  REQUIRE(health);
  CHECK(health->status == 200);

  const auto malls = client.Get("/api/malls");
  REQUIRE(malls);
  CHECK(malls->status == 200);
  CHECK(json::parse(malls->body).size() == 5);

  const auto ok = client.Post("/api/skyline", s1_request().dump(), "application/json");
  REQUIRE(ok);
  CHECK(ok->status == 200);
  const json body = json::parse(ok->body);
  CHECK(body["entries"].size() == 5);
  CHECK(body["divergence"] == false);
  CHECK(body["entries"][0]["code"] == "OH1");
  CHECK(body["entries"][0]["rank"] == 1);
  for (const char* key : {"rank", "code", "name", "lat", "lng", "distance_km", "store_number",
                          "parking_space", "food_court", "income", "population",
                          "selected_facility_counts", "probability"}) {
    CHECK(body["entries"][0].contains(key));
  }

  const auto bad = client.Post("/api/skyline", R"({"origin": "here"})", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);
}

TEST_CASE("concurrent queries while the dataset is swapped") {
  MallService service;
  service.load(generate_synthetic_dataset(90, 1));
  std::vector<std::future<bool>> jobs;
  for (int t = 0; t < 8; ++t) {
    jobs.push_back(std::async(std::launch::async, [&service, t] {
      bool ok = true;
      for (int i = 0; i < 20; ++i) {
        const QueryResponse r = service.handle_query(
            parse_query_request(s1_request(t % 2 ? "bnl" : "dnc", 10)));
        ok = ok && !r.divergence && !r.entries.empty();
      }
      return ok;
    }));
  }
  for (int i = 0; i < 10; ++i) service.load(generate_synthetic_dataset(90, 100 + i));
  for (auto& j : jobs) CHECK(j.get());
}
