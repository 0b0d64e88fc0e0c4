//------------------------------------------------------------------------------
//
//   Copyright 2026 The usvcg Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "usvcg/usvcg.h"

namespace {

using Json = nlohmann::json;

std::string Read(std::string const &name)
{
  std::ifstream      in(std::string(USVCG_DATA_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Owns a handle and the last result string.
struct Session
{
  usvcg_instance *inst = nullptr;
  char           *out  = nullptr;

  explicit Session(std::string const &file)
  {
    REQUIRE(usvcg_instance_create(Read(file).c_str(), &inst) == USVCG_OK);
  }
  ~Session()
  {
    usvcg_string_free(out);
    usvcg_instance_destroy(inst);
  }
  Json Take()
  {
    REQUIRE(out != nullptr);
    Json j = Json::parse(out);
    usvcg_string_free(out);
    out = nullptr;
    return j;
  }
};

}  // namespace

TEST_SUITE("c_api")
{
TEST_CASE("version string")
{
  CHECK(std::string(usvcg_version()) == "0.1.0");
}

TEST_CASE("malformed documents are schema errors")
{
  usvcg_instance *inst = nullptr;
  CHECK(usvcg_instance_create("{not json", &inst) == USVCG_SCHEMA);
  CHECK(inst == nullptr);
  CHECK(std::string(usvcg_last_error()).rfind("SchemaError: ", 0) == 0);

  CHECK(usvcg_instance_create(R"({"goods": 2})", &inst) == USVCG_SCHEMA);
  CHECK(usvcg_instance_create(nullptr, &inst) != USVCG_OK);
}

TEST_CASE("solve on the mean type")
{
  Session s("running_example.json");
  REQUIRE(usvcg_solve(s.inst, R"({"mean": true})", &s.out) == USVCG_OK);
  auto const j = s.Take();
  CHECK(j["decision"]["tax"].get<double>() == doctest::Approx(374.6098).epsilon(1e-6));
  CHECK(j["decision"]["allocation"][0].get<double>() == doctest::Approx(0.4));
}

TEST_CASE("solve with an explicit type")
{
  Session s("running_example.json");
  REQUIRE(usvcg_solve(s.inst, R"({"type": {"alloc": [0.7, 0.3], "money": 1.2}})", &s.out) ==
          USVCG_OK);
  auto const j = s.Take();
  CHECK(j["decision"]["allocation"][0].get<double>() == doctest::Approx(0.7));
  CHECK(usvcg_solve(s.inst, R"({"type": {"alloc": [0.7, 0.7], "money": 1.2}})", &s.out) ==
        USVCG_SCHEMA);
}

TEST_CASE("a divergent instance is a solver failure")
{
  Session s("divergent.json");
  CHECK(usvcg_solve(s.inst, R"({"type": {"alloc": [1], "money": 1}})", &s.out) == USVCG_SOLVER);
  CHECK(std::string(usvcg_last_error()).rfind("TaxDivergence: ", 0) == 0);
}

TEST_CASE("elicitation suspends on follow-ups and resumes with answers")
{
  Session s("zero_spend_ballots.json");
  REQUIRE(usvcg_elicit(s.inst, nullptr, &s.out) == USVCG_PENDING);
  auto const q = s.Take();
  CHECK(q["status"] == "pending");
  REQUIRE(q["questions"].size() == 1);
  CHECK(q["questions"][0]["agent"] == 0);
  CHECK(q["questions"][0]["good"] == 1);

  auto const answers = Read("zero_spend_answers.json");
  REQUIRE(usvcg_elicit(s.inst, answers.c_str(), &s.out) == USVCG_OK);
  auto const done = s.Take();
  CHECK(done["status"] == "complete");
  CHECK(done["types"][0]["alloc"][1].get<double>() == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(done["types"][0]["money"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));

  CHECK(usvcg_elicit(s.inst, R"({"answers": [{"agent": 1, "good": 1, "tau": 1}]})", &s.out) ==
        USVCG_SCHEMA);
}

TEST_CASE("reference ballots invert through the handle")
{
  Session s("running_example_ballots.json");
  REQUIRE(usvcg_elicit(s.inst, nullptr, &s.out) == USVCG_OK);
  auto const j = s.Take();
  CHECK(j["types"][0]["alloc"][0].get<double>() == doctest::Approx(0.7).epsilon(1e-2));
  CHECK(j["types"][1]["money"].get<double>() == doctest::Approx(1.3).epsilon(1e-2));
}

TEST_CASE("check accepts a mechanism result and rejects a tampered one")
{
  Session s("running_example.json");
  REQUIRE(usvcg_mechanism(s.inst, nullptr, &s.out) == USVCG_OK);
  auto result = s.Take();
  REQUIRE(usvcg_check(s.inst, result.dump().c_str(), &s.out) == USVCG_OK);
  CHECK(s.Take()["passed"] == true);

  result["payments"][1] = result["payments"][1].get<double>() + 0.5;
  CHECK(usvcg_check(s.inst, result.dump().c_str(), &s.out) == USVCG_PROPERTY_FAILED);
  CHECK(s.Take()["passed"] == false);

  CHECK(usvcg_check(s.inst, "[]", &s.out) == USVCG_SCHEMA);
}

TEST_CASE("mechanism modes are exclusive")
{
  Session s("running_example.json");
  CHECK(usvcg_mechanism(s.inst, R"({"hetero": true, "non_positive": true})", &s.out) ==
        USVCG_SCHEMA);
  CHECK(std::string(usvcg_last_error()).rfind("InvalidArgument: ", 0) == 0);
}

TEST_CASE("a zero-bias configuration reproduces the plain mechanism")
{
  Session    s("running_example.json");
  auto const options = R"({"bias": )" + Read("bias_zero.json") + "}";
  REQUIRE(usvcg_mechanism(s.inst, nullptr, &s.out) == USVCG_OK);
  auto const a = s.Take();
  REQUIRE(usvcg_mechanism(s.inst, options.c_str(), &s.out) == USVCG_OK);
  auto const b = s.Take();
  CHECK(a["decision"].dump() == b["decision"].dump());
}

TEST_CASE("fuzz with zero trials passes with a warning")
{
  Session s("running_example.json");
  REQUIRE(usvcg_fuzz(s.inst, R"({"trials": 0})", &s.out) == USVCG_OK);
  auto const j = s.Take();
  CHECK(j["passed"] == true);
}

TEST_CASE("diverge reports the growth exponent")
{
  char *out = nullptr;
  int const st = usvcg_diverge(R"({"p": 0.3, "q": 0.5, "n_list": [10, 100, 1000]})", &out);
  REQUIRE(out != nullptr);
  auto const j = Json::parse(out);
  usvcg_string_free(out);
  CHECK(st == USVCG_PROPERTY_FAILED);
  CHECK(j["rows"].size() == 3);
}

TEST_CASE("validate reports assumptions")
{
  Session s("running_example.json");
  CHECK(usvcg_validate(s.inst, &s.out) == USVCG_OK);
  CHECK(s.Take().is_object());
}

TEST_CASE("null handles are usage errors")
{
  char *out = nullptr;
  CHECK(usvcg_solve(nullptr, nullptr, &out) == USVCG_USAGE);
  CHECK(out == nullptr);
  usvcg_string_free(nullptr);
  usvcg_instance_destroy(nullptr);
}
}
