// Writes the synthetic school stand-in dataset in snapshot-tsv layout.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "synthetic_school.hpp"
#include "tempograph/ingestion.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generate the synthetic school contact dataset"};
    std::string out = "synthetic_school";
    std::uint64_t seed = 20230417;
    app.add_option("--out", out, "output directory");
    app.add_option("--seed", seed, "generator seed");
    CLI11_PARSE(app, argc, argv);

    const auto g = tempograph::testing::synthetic_school(seed);
    tempograph::write_snapshot_tsv(g, "synthetic-school", out);
    std::cout << "wrote " << g.nodes().size() << " nodes, " << g.edges().size() << " edges to " << out << "\n";
    return 0;
}
