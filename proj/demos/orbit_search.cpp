// Walks the orbit-test search over a spread of rational parameters and shows
// each outcome: certificates where the group is provably non-free, the two
// gates (congruence obstruction, known-free region), and budget exhaustion.

#include <iostream>

#include "relnum/relnum.hpp"

int main() {
  using namespace relnum;

  const char* alphas[] = {"3/2", "41/18", "57/25", "59/26", "43/27", "43/18",
                          "4/5", "-6/7", "9/2", "401/100"};
  const SearchBudget budget;  // letters <= 6, |exponent| <= 64, <= 10^6 nodes

  std::cout << "orbit test at default budget (letters <= " << budget.max_letters
            << ", |exp| <= " << budget.max_abs_exponent << ", nodes <= " << budget.max_nodes
            << ")\n\n";

  for (const char* text : alphas) {
    const auto out = orbit_test_search(parse_rational(text), budget);
    std::cout << text << ": " << outcome_name(out.kind);
    switch (out.kind) {
      case OutcomeKind::Found:
        std::cout << "  " << format_word(out.certificate->word) << " sends "
                  << target_name(out.certificate->target) << " to 1/2  ("
                  << out.nodes_visited << " nodes)";
        break;
      case OutcomeKind::Exhausted:
        std::cout << "  (" << out.nodes_visited << " nodes)";
        break;
      default:
        std::cout << "  " << out.reason;
        break;
    }
    std::cout << "\n";
  }

  // A deliberately tiny budget on a parameter the gates cannot decide.
  const auto small = orbit_test_search(parse_rational("1/2"), SearchBudget{2, 2, 1000});
  std::cout << "\n1/2 at (letters <= 2, |exp| <= 2): " << outcome_name(small.kind) << " after "
            << small.nodes_visited << " nodes\n";
  return 0;
}
