// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "harness/evaluate.hpp"

using namespace agentnet::bench;

TEST_CASE("option answers") {
    CHECK(evaluate(BenchmarkKind::Bbh, "(A)", "(A)") == 1);
    CHECK(evaluate(BenchmarkKind::Bbh, "the answer is (b).", "(B)") == 1);
    CHECK(evaluate(BenchmarkKind::Bbh, "(B)", "(A)") == 0);
    CHECK(evaluate(BenchmarkKind::Bbh, "", "(A)") == 0);
    CHECK(normalize_option("  Answer: ( C ). ") == "c");
}

TEST_CASE("math answers compare as numbers when they can") {
    CHECK(evaluate(BenchmarkKind::Math, "\\boxed{\\frac{1}{2}}", "0.5") == 1);
    CHECK(evaluate(BenchmarkKind::Math, "\\dfrac{6}{8}", "\\frac34") == 1);
    CHECK(evaluate(BenchmarkKind::Math, "12,345", "12345") == 1);
    CHECK(evaluate(BenchmarkKind::Math, "y = -3", "-3") == 1);
    CHECK(evaluate(BenchmarkKind::Math, "0.33", "\\frac{1}{3}") == 0);
    CHECK(evaluate(BenchmarkKind::Math, "\\sqrt3", "\\sqrt{3}") == 1);
    CHECK(normalize_math("\\left( 1, 2 \\right)") == "(1,2)");
    CHECK(normalize_math("\\text{5} cm") == "5cm");
}

TEST_CASE("api calls compare by name and arguments") {
    const auto call = parse_api_call("API-Request: [AddAlarm(time='07:00', note=\"Wake, up\")]");
    REQUIRE(call);
    CHECK(call->name == "addalarm");
    CHECK(call->arguments.at("time") == "07:00");
    CHECK(call->arguments.at("note") == "wake, up");
    CHECK(parse_api_call(R"({"api_name": "AddAlarm", "parameters": {"time": "07:00", "note": "Wake, up"}})") == call);
    CHECK_FALSE(parse_api_call("just words"));
    CHECK(evaluate(BenchmarkKind::ApiBank, "GetToday()", "GetToday()") == 1);
    CHECK(evaluate(BenchmarkKind::ApiBank, "GetToday(x=1)", "GetToday()") == 0);
    CHECK(evaluate("api-bank", "f(a=1, b=2)", "F(b=2, a=1)") == 1);
}
