#include <doctest.h>

#include "sheafctx/io.hpp"
#include "support/fixtures.hpp"

using namespace sheafctx;

#ifndef SHEAFCTX_FIXTURE_DIR
#define SHEAFCTX_FIXTURE_DIR "fixtures"
#endif

namespace {

std::string fixture(const std::string& name) {
  return std::string(SHEAFCTX_FIXTURE_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("serialization canonicalizes and round-trips byte-identically") {
  for (const char* name : {"prbox.model", "signalling.model", "product.model",
                           "bell_triangle.model", "chsh_singlet.model"}) {
    CAPTURE(name);
    std::string canonical = serialize_model_document(parse_model_document(
        read_file(fixture(name))));
    std::string again = serialize_model_document(parse_model_document(canonical));
    CHECK(canonical == again);
  }
  for (const char* name : {"net2_singlet.net", "net4_pairs.net", "net4_nested.net"}) {
    CAPTURE(name);
    std::string canonical = serialize_net_document(parse_net_document(
        read_file(fixture(name))));
    std::string again = serialize_net_document(parse_net_document(canonical));
    CHECK(canonical == again);
  }
}

TEST_CASE("parsed fixtures match the programmatic ones") {
  auto doc = parse_model_document(read_file(fixture("prbox.model")));
  REQUIRE(doc.carrier == "rational");
  REQUIRE(doc.rational_model.has_value());
  auto expected = testing::pr_box();
  CHECK(doc.scenario() == expected.scenario());
  for (size_t c = 0; c < expected.scenario().cover().size(); ++c) {
    CHECK(doc.rational_model->at(c) == expected.at(c));
  }
}

TEST_CASE("model documents survive a build-serialize-parse cycle") {
  ModelDocument doc = model_document_from("triangle", testing::bell_triangle_model());
  std::string text = serialize_model_document(doc);
  ModelDocument parsed = parse_model_document(text);
  CHECK(parsed.name == "triangle");
  for (size_t c = 0; c < doc.scenario().cover().size(); ++c) {
    CHECK(parsed.rational_model->at(c) == doc.rational_model->at(c));
  }
}

TEST_CASE("malformed documents raise ParseError diagnostics") {
  CHECK_THROWS_AS(parse_model_document("{"), Error);
  CHECK_THROWS_AS(parse_model_document("{}"), Error);
  // Missing carrier.
  CHECK_THROWS_AS(parse_model_document(R"({"scenario": {}, "table": {}})"), Error);
  // Bad rational literal.
  std::string bad_weight = R"({
    "carrier": "rational",
    "scenario": {"measurements": ["a"], "outcomes": ["0"], "cover": [["a"]]},
    "table": {"a": {"0": "one-half"}}
  })";
  CHECK_THROWS_AS(parse_model_document(bad_weight), Error);
  // Antichain violation surfaces as its own code.
  std::string nested_cover = R"({
    "carrier": "rational",
    "scenario": {"measurements": ["a", "b"], "outcomes": ["0"], "cover": [["a"], ["a", "b"]]},
    "table": {}
  })";
  try {
    parse_model_document(nested_cover);
    FAIL("expected AntichainViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AntichainViolation);
  }
}

TEST_CASE("boolean-carrier documents parse to possibilistic models") {
  std::string text = R"({
    "carrier": "boolean",
    "scenario": {"measurements": ["a", "b"], "outcomes": ["0", "1"],
                 "cover": [["a", "b"]]},
    "table": {"a|b": {"0|0": true, "1|1": true}}
  })";
  ModelDocument doc = parse_model_document(text);
  REQUIRE(doc.boolean_model.has_value());
  CHECK(doc.boolean_model->at(0).support().size() == 2);
  CHECK(is_no_signalling(*doc.boolean_model).holds);
}

TEST_CASE("net documents expose sites, state, and regions") {
  NetDocument doc = parse_net_document(read_file(fixture("net2_singlet.net")));
  CHECK(doc.net.sites().size() == 2);
  CHECK(doc.net.sites()[0].id == "L");  // sorted site-id order
  CHECK(doc.net.state().is_pure());
  REQUIRE(doc.regions.size() == 2);
  CHECK(doc.regions[0].setting_angles_deg == std::vector<double>{0, 90});
}
