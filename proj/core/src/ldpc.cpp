#include "pnc/ldpc.hpp"

#include "pnc/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>

namespace pnc {

LdpcCode::LdpcCode(int n, std::vector<std::vector<int>> check_rows)
    : n_(n), rows_(std::move(check_rows)), cols_(static_cast<std::size_t>(n)) {
  if (n <= 0) {
    throw DimensionMismatch("LdpcCode: code length must be positive");
  }
  for (std::size_t c = 0; c < rows_.size(); ++c) {
    auto& row = rows_[c];
    std::sort(row.begin(), row.end());
    if (std::adjacent_find(row.begin(), row.end()) != row.end()) {
      throw ParseError("LdpcCode: repeated variable in a check");
    }
    for (int v : row) {
      if (v < 0 || v >= n) {
        throw ParseError("LdpcCode: variable index out of range");
      }
      cols_[static_cast<std::size_t>(v)].push_back(static_cast<int>(c));
    }
  }
  build_encoder();
}

void LdpcCode::build_encoder() {
  const auto n = static_cast<std::size_t>(n_);
  const std::size_t words = (n + 63) / 64;
  std::vector<std::vector<std::uint64_t>> h(rows_.size(), std::vector<std::uint64_t>(words, 0));
  for (std::size_t c = 0; c < rows_.size(); ++c) {
    for (int v : rows_[c]) {
      h[c][static_cast<std::size_t>(v) / 64] |= std::uint64_t{1} << (static_cast<std::size_t>(v) % 64);
    }
  }
  auto bit = [](const std::vector<std::uint64_t>& row, std::size_t col) {
    return (row[col / 64] >> (col % 64)) & 1U;
  };

  // Reduced row echelon form over GF(2).
  std::vector<int> pivot_cols;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < h.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < h.size() && !bit(h[pivot], col)) {
      ++pivot;
    }
    if (pivot == h.size()) {
      continue;
    }
    std::swap(h[pivot], h[rank]);
    for (std::size_t r = 0; r < h.size(); ++r) {
      if (r != rank && bit(h[r], col)) {
        for (std::size_t w = 0; w < words; ++w) {
          h[r][w] ^= h[rank][w];
        }
      }
    }
    pivot_cols.push_back(static_cast<int>(col));
    ++rank;
  }
  rank_ = static_cast<int>(rank);

  std::vector<int> info_index(n, -1);
  info_pos_.clear();
  std::size_t next_pivot = 0;
  for (std::size_t col = 0; col < n; ++col) {
    if (next_pivot < pivot_cols.size() && pivot_cols[next_pivot] == static_cast<int>(col)) {
      ++next_pivot;
      continue;
    }
    info_index[col] = static_cast<int>(info_pos_.size());
    info_pos_.push_back(static_cast<int>(col));
  }
  parity_pos_ = pivot_cols;
  parity_deps_.assign(rank, {});
  for (std::size_t r = 0; r < rank; ++r) {
    for (int col : info_pos_) {
      if (bit(h[r], static_cast<std::size_t>(col))) {
        parity_deps_[r].push_back(info_index[static_cast<std::size_t>(col)]);
      }
    }
  }
}

Bits LdpcCode::encode(std::span<const std::uint8_t> info) const {
  if (static_cast<int>(info.size()) != info_length()) {
    throw LengthMismatch("LdpcCode::encode: wrong number of information bits");
  }
  Bits word(static_cast<std::size_t>(n_), 0);
  for (std::size_t t = 0; t < info_pos_.size(); ++t) {
    word[static_cast<std::size_t>(info_pos_[t])] = info[t] & 1U;
  }
  for (std::size_t p = 0; p < parity_pos_.size(); ++p) {
    std::uint8_t acc = 0;
    for (int t : parity_deps_[p]) {
      acc ^= info[static_cast<std::size_t>(t)] & 1U;
    }
    word[static_cast<std::size_t>(parity_pos_[p])] = acc;
  }
  return word;
}

Bits LdpcCode::extract_info(std::span<const std::uint8_t> codeword) const {
  if (static_cast<int>(codeword.size()) != n_) {
    throw LengthMismatch("LdpcCode::extract_info: wrong codeword length");
  }
  Bits info(info_pos_.size());
  for (std::size_t t = 0; t < info_pos_.size(); ++t) {
    info[t] = codeword[static_cast<std::size_t>(info_pos_[t])];
  }
  return info;
}

bool LdpcCode::syndrome_ok(std::span<const std::uint8_t> word) const {
  if (static_cast<int>(word.size()) != n_) {
    throw LengthMismatch("LdpcCode::syndrome_ok: wrong word length");
  }
  for (const auto& row : rows_) {
    std::uint8_t acc = 0;
    for (int v : row) {
      acc ^= word[static_cast<std::size_t>(v)] & 1U;
    }
    if (acc != 0) {
      return false;
    }
  }
  return true;
}

namespace {

std::vector<int> read_ints(const std::string& line) {
  std::istringstream in(line);
  std::vector<int> out;
  int v = 0;
  while (in >> v) {
    out.push_back(v);
  }
  if (!in.eof()) {
    throw ParseError("alist: non-integer token");
  }
  return out;
}

std::vector<std::vector<int>> read_nonblank_lines(std::istream& in) {
  std::vector<std::vector<int>> lines;
  for (std::string line; std::getline(in, line);) {
    auto ints = read_ints(line);
    if (!ints.empty()) {
      lines.push_back(std::move(ints));
    }
  }
  return lines;
}

}  // namespace

LdpcCode LdpcCode::from_alist(std::istream& in) {
  const auto lines = read_nonblank_lines(in);
  if (lines.size() < 4 || lines[0].size() != 2 || lines[1].size() != 2) {
    throw ParseError("alist: truncated header");
  }
  const int n = lines[0][0];
  const int m = lines[0][1];
  if (n <= 0 || m <= 0) {
    throw ParseError("alist: nonpositive dimensions");
  }
  const auto& col_deg = lines[2];
  const auto& row_deg = lines[3];
  if (static_cast<int>(col_deg.size()) != n || static_cast<int>(row_deg.size()) != m ||
      static_cast<int>(lines.size()) != 4 + n + m) {
    throw ParseError("alist: degree lists or adjacency lines do not match n m");
  }
  auto nonzero = [](const std::vector<int>& v) {
    std::vector<int> out;
    std::copy_if(v.begin(), v.end(), std::back_inserter(out), [](int x) { return x != 0; });
    return out;
  };
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(m));
  std::vector<std::vector<int>> cols_check(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    auto entries = nonzero(lines[4 + static_cast<std::size_t>(v)]);
    if (static_cast<int>(entries.size()) != col_deg[static_cast<std::size_t>(v)]) {
      throw ParseError("alist: column adjacency does not match its degree");
    }
    for (int c : entries) {
      if (c < 1 || c > m) {
        throw ParseError("alist: check index out of range");
      }
      cols_check[static_cast<std::size_t>(v)].push_back(c - 1);
    }
  }
  for (int c = 0; c < m; ++c) {
    auto entries = nonzero(lines[4 + static_cast<std::size_t>(n) + static_cast<std::size_t>(c)]);
    if (static_cast<int>(entries.size()) != row_deg[static_cast<std::size_t>(c)]) {
      throw ParseError("alist: row adjacency does not match its degree");
    }
    for (int v : entries) {
      if (v < 1 || v > n) {
        throw ParseError("alist: variable index out of range");
      }
      rows[static_cast<std::size_t>(c)].push_back(v - 1);
    }
  }
  LdpcCode code(n, std::move(rows));
  for (int v = 0; v < n; ++v) {
    auto expect = cols_check[static_cast<std::size_t>(v)];
    std::sort(expect.begin(), expect.end());
    if (expect != code.cols_[static_cast<std::size_t>(v)]) {
      throw ParseError("alist: column and row adjacency lists disagree");
    }
  }
  return code;
}

LdpcCode LdpcCode::from_alist_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("alist: cannot open " + path);
  }
  return from_alist(in);
}

void LdpcCode::write_alist(std::ostream& out) const {
  std::size_t max_col = 0;
  std::size_t max_row = 0;
  for (const auto& c : cols_) {
    max_col = std::max(max_col, c.size());
  }
  for (const auto& r : rows_) {
    max_row = std::max(max_row, r.size());
  }
  out << n_ << ' ' << rows_.size() << '\n' << max_col << ' ' << max_row << '\n';
  auto degrees = [&out](const std::vector<std::vector<int>>& lists) {
    for (std::size_t t = 0; t < lists.size(); ++t) {
      out << (t ? " " : "") << lists[t].size();
    }
    out << '\n';
  };
  degrees(cols_);
  degrees(rows_);
  auto adjacency = [&out](const std::vector<std::vector<int>>& lists, std::size_t width) {
    for (const auto& l : lists) {
      for (std::size_t t = 0; t < width; ++t) {
        out << (t ? " " : "") << (t < l.size() ? l[t] + 1 : 0);
      }
      out << '\n';
    }
  };
  adjacency(cols_, max_col);
  adjacency(rows_, max_row);
}

LdpcCode hamming_7_4() {
  return LdpcCode(7, {{0, 2, 4, 6}, {1, 2, 5, 6}, {3, 4, 5, 6}});
}

LdpcCode hamming_7_4_full() {
  // every nonzero sum of the three rows above
  return LdpcCode(7, {{0, 2, 4, 6}, {1, 2, 5, 6}, {3, 4, 5, 6}, {0, 1, 4, 5},
                      {0, 2, 3, 5}, {1, 2, 3, 4}, {0, 1, 3, 6}});
}

LdpcCode make_peg_code(int n, int m, int var_degree, std::uint64_t seed) {
  if (n <= 0 || m <= 0 || var_degree <= 0 || (n * var_degree) % m != 0 || var_degree > m) {
    throw DimensionMismatch("make_peg_code: n * var_degree must be a multiple of m");
  }
  const int row_degree = n * var_degree / m;
  std::mt19937_64 rng(seed);
  std::vector<std::vector<int>> var_adj(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> chk_adj(static_cast<std::size_t>(m));
  std::vector<int> chk_dist(static_cast<std::size_t>(m));
  std::vector<int> var_seen(static_cast<std::size_t>(n));
  const int unreached = std::numeric_limits<int>::max();

  for (int v = 0; v < n; ++v) {
    for (int e = 0; e < var_degree; ++e) {
      // Breadth-first depth of every check from v in the current graph.
      std::fill(chk_dist.begin(), chk_dist.end(), unreached);
      std::fill(var_seen.begin(), var_seen.end(), 0);
      std::queue<int> frontier;
      var_seen[static_cast<std::size_t>(v)] = 1;
      frontier.push(v);
      std::vector<int> depth_of_var(static_cast<std::size_t>(n), 0);
      while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop();
        for (int c : var_adj[static_cast<std::size_t>(u)]) {
          if (chk_dist[static_cast<std::size_t>(c)] != unreached) {
            continue;
          }
          chk_dist[static_cast<std::size_t>(c)] = depth_of_var[static_cast<std::size_t>(u)];
          for (int w : chk_adj[static_cast<std::size_t>(c)]) {
            if (!var_seen[static_cast<std::size_t>(w)]) {
              var_seen[static_cast<std::size_t>(w)] = 1;
              depth_of_var[static_cast<std::size_t>(w)] = depth_of_var[static_cast<std::size_t>(u)] + 1;
              frontier.push(w);
            }
          }
        }
      }
      // Farthest available check, then lowest degree, then random.
      std::vector<int> candidates;
      int best_dist = -1;
      std::size_t best_deg = std::numeric_limits<std::size_t>::max();
      for (int c = 0; c < m; ++c) {
        const auto cu = static_cast<std::size_t>(c);
        if (static_cast<int>(chk_adj[cu].size()) >= row_degree || chk_dist[cu] == 0) {
          continue;
        }
        const int dist = chk_dist[cu];
        const std::size_t deg = chk_adj[cu].size();
        if (dist > best_dist || (dist == best_dist && deg < best_deg)) {
          best_dist = dist;
          best_deg = deg;
          candidates.assign(1, c);
        } else if (dist == best_dist && deg == best_deg) {
          candidates.push_back(c);
        }
      }
      if (candidates.empty()) {
        throw DimensionMismatch("make_peg_code: ran out of check sockets");
      }
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      const int c = candidates[pick(rng)];
      var_adj[static_cast<std::size_t>(v)].push_back(c);
      chk_adj[static_cast<std::size_t>(c)].push_back(v);
    }
  }
  return LdpcCode(n, std::move(chk_adj));
}

LdpcDecoder::LdpcDecoder(const LdpcCode& code) : code_(&code) {
  const auto& rows = code.check_rows();
  var_edges_.assign(static_cast<std::size_t>(code.length()), {});
  check_start_.reserve(rows.size() + 1);
  check_start_.push_back(0);
  for (const auto& row : rows) {
    for (int v : row) {
      var_edges_[static_cast<std::size_t>(v)].push_back(static_cast<int>(edge_var_.size()));
      edge_var_.push_back(v);
    }
    check_start_.push_back(static_cast<int>(edge_var_.size()));
  }
  v2c_.resize(edge_var_.size());
  c2v_.resize(edge_var_.size());
}

DecodeResult LdpcDecoder::decode(std::span<const double> llr_in, int max_iterations) {
  const auto n = static_cast<std::size_t>(code_->length());
  if (llr_in.size() != n) {
    throw DimensionMismatch("LdpcDecoder::decode: LLR count differs from code length");
  }
  DecodeResult out;
  out.posterior.assign(llr_in.begin(), llr_in.end());
  out.hard.assign(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    out.hard[v] = llr_in[v] < 0.0 ? 1 : 0;
  }
  for (std::size_t e = 0; e < edge_var_.size(); ++e) {
    v2c_[e] = llr_in[static_cast<std::size_t>(edge_var_[e])];
    c2v_[e] = 0.0;
  }
  if (max_iterations <= 0) {
    out.converged = code_->syndrome_ok(out.hard);
    return out;
  }

  constexpr double kMaxTanh = 1.0 - 1e-15;
  std::vector<double> t;
  std::vector<double> suffix;
  for (int it = 1; it <= max_iterations; ++it) {
    for (std::size_t c = 0; c + 1 < check_start_.size(); ++c) {
      const auto begin = static_cast<std::size_t>(check_start_[c]);
      const auto end = static_cast<std::size_t>(check_start_[c + 1]);
      const std::size_t deg = end - begin;
      t.resize(deg);
      suffix.resize(deg + 1);
      for (std::size_t a = 0; a < deg; ++a) {
        // tanh(x/2) through a single exp; libm tanh is several times slower
        const double x = v2c_[begin + a];
        const double e = std::exp(-std::abs(x));
        const double th = (1.0 - e) / (1.0 + e);
        t[a] = x < 0.0 ? -th : th;
      }
      suffix[deg] = 1.0;
      for (std::size_t a = deg; a-- > 0;) {
        suffix[a] = suffix[a + 1] * t[a];
      }
      double prefix = 1.0;
      for (std::size_t a = 0; a < deg; ++a) {
        const double prod = std::clamp(prefix * suffix[a + 1], -kMaxTanh, kMaxTanh);
        c2v_[begin + a] = std::log((1.0 + prod) / (1.0 - prod));
        prefix *= t[a];
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      double total = llr_in[v];
      for (int e : var_edges_[v]) {
        total += c2v_[static_cast<std::size_t>(e)];
      }
      out.posterior[v] = total;
      out.hard[v] = total < 0.0 ? 1 : 0;
      for (int e : var_edges_[v]) {
        v2c_[static_cast<std::size_t>(e)] = total - c2v_[static_cast<std::size_t>(e)];
      }
    }
    out.iterations = it;
    if (code_->syndrome_ok(out.hard)) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace pnc
