#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <string>

// Exit-code contract of the command-line tool: 0 = property holds or
// feasible, 1 = property fails or infeasible, 2 = input or usage error.

#ifndef SHEAFCTX_CLI_PATH
#define SHEAFCTX_CLI_PATH "sheafctx"
#endif
#ifndef SHEAFCTX_FIXTURE_DIR
#define SHEAFCTX_FIXTURE_DIR "fixtures"
#endif

namespace {

int run(const std::string& args) {
  std::string command = std::string(SHEAFCTX_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(command.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string fixture(const std::string& name) {
  return std::string(SHEAFCTX_FIXTURE_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("scenario validate exits by document state") {
  CHECK(run("scenario validate " + fixture("prbox.model")) == 0);
  CHECK(run("scenario validate /nonexistent.model") == 2);
}

TEST_CASE("check-nosig exit codes") {
  CHECK(run("model check-nosig " + fixture("prbox.model")) == 0);
  CHECK(run("model check-nosig " + fixture("chsh_singlet.model")) == 0);
  CHECK(run("model check-nosig " + fixture("signalling.model")) == 1);
}

TEST_CASE("find-local exit codes") {
  CHECK(run("model find-local " + fixture("product.model")) == 0);
  CHECK(run("model find-local " + fixture("prbox.model")) == 1);
  CHECK(run("model find-local " + fixture("chsh_singlet.model") +
            " --denom-bound 1000000") == 1);
}

TEST_CASE("bell subcommand flags the triangle violation") {
  CHECK(run("model bell " + fixture("bell_triangle.model") + " --pairs a,b,c") == 1);
  CHECK(run("model bell " + fixture("bell_triangle.model") + " --pairs a,b") == 2);
}

TEST_CASE("quantum subcommands") {
  CHECK(run("quantum singlet --angles 0,90,45,135") == 1);  // Bell violated
  CHECK(run("quantum chsh-scan --step 45") == 1);
  CHECK(run("quantum chsh-scan --step 7") == 2);  // does not divide 360
}

TEST_CASE("aqft subcommands") {
  CHECK(run("aqft check " + fixture("net2_singlet.net")) == 0);
  CHECK(run("aqft check " + fixture("net4_nested.net")) == 0);
  CHECK(run("aqft sheaf " + fixture("net2_singlet.net")) == 0);
  CHECK(run("aqft sheaf " + fixture("net4_pairs.net")) == 0);
  CHECK(run("aqft sheaf " + fixture("net4_nested.net")) == 2);  // nested regions
}

TEST_CASE("json format emits parseable reports") {
  CHECK(run("--format json model check-nosig " + fixture("prbox.model")) == 0);
  CHECK(run("--format badformat model check-nosig " + fixture("prbox.model")) == 2);
}

TEST_CASE("SHEAFCTX_FORMAT sets the default report format") {
  std::string command = "SHEAFCTX_FORMAT=json " + std::string(SHEAFCTX_CLI_PATH) +
                        " model check-nosig " + fixture("prbox.model") +
                        " | grep -q '\"no_signalling\": true'";
  int status = std::system(command.c_str());
  REQUIRE(status != -1);
  CHECK(WEXITSTATUS(status) == 0);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("model") == 2);
  CHECK(run("unknown-subcommand") == 2);
}
