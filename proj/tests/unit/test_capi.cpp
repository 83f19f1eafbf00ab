// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include <agentnet/agentnet.h>

namespace {

const std::string kGolden = std::string(AGENTNET_DATA_DIR) + "/scenarios/golden/config.json";
const std::string kMini = std::string(AGENTNET_FIXTURE_DIR) + "/bbh_mini";

std::string take(char* s) {
    std::string out = s ? s : "";
    agentnet_string_free(s);
    return out;
}

} // namespace

TEST_CASE("version and evaluation") {
    CHECK(std::string(agentnet_version()).size() > 0);
    int score = -1;
    CHECK(agentnet_evaluate("math", "\\frac{1}{2}", "0.5", &score) == AGENTNET_OK);
    CHECK(score == 1);
    CHECK(agentnet_evaluate("trivia", "a", "a", &score) != AGENTNET_OK);
    CHECK(std::string(agentnet_last_error()).find("trivia") != std::string::npos);
    CHECK(agentnet_evaluate("bbh", nullptr, "a", &score) == AGENTNET_ERR_ARGUMENT);
}

TEST_CASE("golden run through the C interface") {
    agentnet_config* cfg = nullptr;
    REQUIRE(agentnet_config_load(kGolden.c_str(), &cfg) == AGENTNET_OK);
    CHECK(agentnet_config_validate(cfg) == AGENTNET_OK);
    agentnet_report* rep = nullptr;
    REQUIRE(agentnet_run(cfg, &rep) == AGENTNET_OK);
    CHECK(agentnet_report_accuracy(rep) == 1.0);
    CHECK(agentnet_report_task_count(rep) == 1);
    char* summary = nullptr;
    CHECK(agentnet_report_summary(rep, &summary) == AGENTNET_OK);
    CHECK(take(summary).find("\"completion_calls\": 15") != std::string::npos);
    char* snap = nullptr;
    REQUIRE(agentnet_report_final_snapshot(rep, &snap) == AGENTNET_OK);
    const std::string snapshot = take(snap);
    char* dot = nullptr;
    CHECK(agentnet_snapshot_to_dot(snapshot.c_str(), 0, &dot) == AGENTNET_OK);
    CHECK(take(dot).find("digraph") != std::string::npos);
    agentnet_report_free(rep);
    agentnet_config_free(cfg);
}

TEST_CASE("config errors map to status codes") {
    agentnet_config* cfg = nullptr;
    CHECK(agentnet_config_load((kMini + "/bad_config.json").c_str(), &cfg) == AGENTNET_ERR_CONFIG);
    CHECK(cfg == nullptr);
    CHECK(agentnet_config_load((kMini + "/absent.json").c_str(), &cfg) == AGENTNET_ERR_IO);
    CHECK(agentnet_config_parse("{not json", nullptr, &cfg) == AGENTNET_ERR_CONFIG);

    REQUIRE(agentnet_config_load((kMini + "/sim_config.json").c_str(), &cfg) == AGENTNET_OK);
    CHECK(agentnet_config_set(cfg, "alpha", "0.7") == AGENTNET_OK);
    CHECK(agentnet_config_set(cfg, "alpha", "x") == AGENTNET_ERR_CONFIG);
    CHECK(agentnet_config_set(cfg, "beta", "1.7") == AGENTNET_OK);
    CHECK(agentnet_config_validate(cfg) == AGENTNET_ERR_CONFIG);
    CHECK(agentnet_config_set(cfg, "beta", "0.9") == AGENTNET_OK);
    CHECK(agentnet_config_validate(cfg) == AGENTNET_OK);
    CHECK(agentnet_config_set(cfg, "gamma", "1") == AGENTNET_ERR_ARGUMENT);
    CHECK(agentnet_config_set(cfg, "sweep-agents", "2,3") == AGENTNET_OK);
    CHECK(agentnet_config_set(cfg, "sweep-cmax", "4") == AGENTNET_OK);
    char* json = nullptr;
    REQUIRE(agentnet_config_to_json(cfg, &json) == AGENTNET_OK);
    CHECK(take(json).find("0.7") != std::string::npos);
    char* csv = nullptr;
    REQUIRE(agentnet_sweep(cfg, &csv) == AGENTNET_OK);
    CHECK(take(csv).rfind("agents,cmax,tasks,accuracy", 0) == 0);

    CHECK(agentnet_config_set(cfg, "dataset", (kMini + "/manifest_627.json").c_str()) == AGENTNET_OK);
    agentnet_report* rep = nullptr;
    CHECK(agentnet_run(cfg, &rep) == AGENTNET_ERR_DATASET);
    CHECK(rep == nullptr);
    agentnet_config_free(cfg);
    CHECK(agentnet_snapshot_to_dot("[]", 0, &json) != AGENTNET_OK);
}
