// Builds a small graph in code, finds three nested communities around one
// vertex and prints them.

#include <iostream>
#include <sstream>

#include "nestseg/nestseg.hpp"

int main() {
  std::istringstream edges(
      "a b\na c\nb c\nc d\nd e\nd f\ne f\nf g\ng h\n"
      "a d\nb d\n");
  const nestseg::Graph g = nestseg::load_edge_list(edges);

  nestseg::RunConfig cfg;
  cfg.sources = {"a"};
  cfg.k = 3;
  cfg.scheme = nestseg::WeightingScheme::sum;
  const auto result = nestseg::run_pipeline(g, cfg);

  const auto& seq = result.sequence;
  for (std::size_t j = 0; j < seq.k(); ++j) {
    std::cout << "V" << j + 1 << " (density " << seq.community_densities[j] << "):";
    for (std::size_t i = 0; i < seq.breakpoints[j + 1]; ++i) std::cout << ' ' << g.label(seq.order.sequence[i]);
    std::cout << '\n';
  }
  std::cout << "score " << seq.total_score << '\n';
}
