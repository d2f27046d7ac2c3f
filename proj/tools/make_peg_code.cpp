// Writes a regular LDPC parity-check matrix built by progressive edge growth
// in alist format.

#include "pnc/ldpc.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"progressive edge growth LDPC generator"};
  int n = 1008;
  int m = 504;
  int dv = 3;
  std::uint64_t seed = 20240601;
  std::string out;
  app.add_option("-n,--length", n, "code length");
  app.add_option("-m,--checks", m, "number of checks");
  app.add_option("--dv", dv, "variable node degree");
  app.add_option("--seed", seed, "tie-break seed");
  app.add_option("-o,--out", out, "output file (stdout if omitted)");
  CLI11_PARSE(app, argc, argv);

  try {
    const pnc::LdpcCode code = pnc::make_peg_code(n, m, dv, seed);
    if (out.empty()) {
      code.write_alist(std::cout);
    } else {
      std::ofstream f(out);
      code.write_alist(f);
    }
    std::cerr << "n=" << code.length() << " m=" << code.checks() << " rank=" << code.rank()
              << " k=" << code.info_length() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
