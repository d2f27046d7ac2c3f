#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pnc {

using Bits = std::vector<std::uint8_t>;

/// Binary LDPC code given by a sparse parity-check matrix H (m checks x n
/// variables). Encoding is systematic on the non-pivot columns of the
/// reduced row echelon form of H.
class LdpcCode {
 public:
  /// check_rows[c] lists the variable indices (zero-based) of check c.
  LdpcCode(int n, std::vector<std::vector<int>> check_rows);

  static LdpcCode from_alist(std::istream& in);
  static LdpcCode from_alist_file(const std::string& path);
  void write_alist(std::ostream& out) const;

  int length() const { return n_; }
  int checks() const { return static_cast<int>(rows_.size()); }
  int rank() const { return rank_; }
  int info_length() const { return n_ - rank_; }
  double rate() const { return static_cast<double>(info_length()) / n_; }

  const std::vector<std::vector<int>>& check_rows() const { return rows_; }
  const std::vector<std::vector<int>>& variable_cols() const { return cols_; }
  /// Codeword positions carrying the information bits, in order.
  const std::vector<int>& info_positions() const { return info_pos_; }

  Bits encode(std::span<const std::uint8_t> info) const;
  Bits extract_info(std::span<const std::uint8_t> codeword) const;
  bool syndrome_ok(std::span<const std::uint8_t> word) const;

 private:
  void build_encoder();

  int n_ = 0;
  int rank_ = 0;
  std::vector<std::vector<int>> rows_;
  std::vector<std::vector<int>> cols_;
  std::vector<int> info_pos_;
  // Parity bit at parity_pos_[p] is the XOR of the info bits listed in
  // parity_deps_[p] (indices into the info vector).
  std::vector<int> parity_pos_;
  std::vector<std::vector<int>> parity_deps_;
};

/// Regular code from progressive edge growth: every variable has degree
/// var_degree, every check degree n * var_degree / m. Ties are broken by a
/// seeded generator, so the result is a pure function of the arguments.
LdpcCode make_peg_code(int n, int m, int var_degree, std::uint64_t seed);

/// The (7,4) Hamming code.
LdpcCode hamming_7_4();

/// Same code with all seven nonzero dual codewords as checks. Every variable
/// has degree 4 and every pair of variables shares exactly two checks, so
/// sum-product corrects any single error; on the 3-check matrix a flip of the
/// degree-3 variable converges to a weight-3 codeword instead.
LdpcCode hamming_7_4_full();

struct DecodeResult {
  std::vector<double> posterior;  // L(c | r)
  Bits hard;
  bool converged = false;
  int iterations = 0;
};

/// Flooding sum-product decoder in the LLR domain with early stop on a zero
/// syndrome. Message memory is reset at every decode() call.
class LdpcDecoder {
 public:
  explicit LdpcDecoder(const LdpcCode& code);

  DecodeResult decode(std::span<const double> llr_in, int max_iterations);

 private:
  const LdpcCode* code_;
  // Edges are stored check-major; var_edges_[v] lists the edge ids of v.
  std::vector<int> edge_var_;
  std::vector<int> check_start_;
  std::vector<std::vector<int>> var_edges_;
  std::vector<double> v2c_;
  std::vector<double> c2v_;
};

}  // namespace pnc
