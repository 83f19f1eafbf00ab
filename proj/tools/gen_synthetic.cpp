// SPDX-License-Identifier: Apache-2.0
// Writes the synthetic two-specialty dataset, its manifest and heuristics.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "harness/synthetic.hpp"

using namespace agentnet::bench;

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: gen_synthetic <dataset-dir> <heuristics-file>\n";
        return 2;
    }
    const std::filesystem::path dir = argv[1];
    std::filesystem::create_directories(dir);
    const auto train = generate_synthetic({200, 2024, 0.3, "syn"});
    const auto test = generate_synthetic({60, 4048, 0.3, "syn-test"});
    write_records(dir / "train.jsonl", train);
    write_records(dir / "test.jsonl", test);

    const auto heur = std::filesystem::path(argv[2]);
    std::ofstream(heur) << synthetic_heuristics().to_json().dump(2) << "\n";

    nlohmann::json manifest = {
        {"benchmark", "bbh"},
        {"labels", {"logic", "lexical", "general"}},
        {"splits", {{"train", {{"path", "train.jsonl"}, {"count", train.size()}}},
                    {"test", {{"path", "test.jsonl"}, {"count", test.size()}}}}},
        {"heuristics", std::filesystem::relative(heur, dir).string()}};
    std::ofstream(dir / "manifest.json") << manifest.dump(2) << "\n";
    return 0;
}
