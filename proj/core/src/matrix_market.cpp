#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string_view>

#include "sptrsv/csr_matrix.hpp"
#include "sptrsv/errors.hpp"

namespace sptrsv {

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string_view skip_spaces(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  return s;
}

template <typename T>
T next_number(std::string_view &s, std::size_t line_no) {
  s = skip_spaces(s);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr == s.data()) {
    throw ParseError("line " + std::to_string(line_no) + ": expected a number");
  }
  s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
  return value;
}

bool is_blank_or_comment(std::string_view line) {
  line = skip_spaces(line);
  return line.empty() || line.front() == '%';
}

} // namespace

CsrLowerTriangular parse_matrix_market(std::istream &in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("empty Matrix Market stream");
  }
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lowercase(object) != "matrix") {
    throw ParseError("missing '%%MatrixMarket matrix' banner");
  }
  if (lowercase(format) != "coordinate") {
    throw ParseError("only coordinate format is supported, got '" + format + "'");
  }
  if (lowercase(field) != "real") {
    throw ParseError("only real matrices are supported, got field '" + field + "'");
  }
  symmetry = lowercase(symmetry);
  if (symmetry != "general" && symmetry != "symmetric") {
    throw ParseError("unsupported symmetry '" + symmetry + "'");
  }

  std::size_t line_no = 1;
  bool have_size = false;
  std::uint64_t rows = 0, cols = 0, declared = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) {
      continue;
    }
    std::string_view rest = line;
    rows = next_number<std::uint64_t>(rest, line_no);
    cols = next_number<std::uint64_t>(rest, line_no);
    declared = next_number<std::uint64_t>(rest, line_no);
    have_size = true;
    break;
  }
  if (!have_size) {
    throw ParseError("missing size line");
  }
  if (rows != cols) {
    throw ParseError("matrix is not square: " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (rows > std::numeric_limits<Index>::max() - 1) {
    throw ParseError("matrix dimension too large");
  }
  const auto n = static_cast<Index>(rows);

  std::vector<Triplet> triplets;
  triplets.reserve(declared);
  std::uint64_t seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) {
      continue;
    }
    std::string_view rest = line;
    const auto i = next_number<std::uint64_t>(rest, line_no);
    const auto j = next_number<std::uint64_t>(rest, line_no);
    const auto v = next_number<double>(rest, line_no);
    if (i < 1 || j < 1 || i > n || j > n) {
      throw ParseError("line " + std::to_string(line_no) + ": index (" + std::to_string(i) + "," +
                       std::to_string(j) + ") out of bounds");
    }
    ++seen;
    triplets.push_back({static_cast<Index>(i - 1), static_cast<Index>(j - 1), v});
  }
  if (seen != declared) {
    throw ParseError("expected " + std::to_string(declared) + " entries, found " +
                     std::to_string(seen));
  }
  return CsrLowerTriangular::from_triplets(n, std::move(triplets));
}

CsrLowerTriangular read_matrix_market(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open '" + path + "'");
  }
  return parse_matrix_market(in);
}

namespace {

void append_double(std::string &out, double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  out.append(buf, ptr);
}

} // namespace

void write_matrix_market(std::ostream &out, const CsrLowerTriangular &a) {
  std::string text = "%%MatrixMarket matrix coordinate real general\n";
  text += std::to_string(a.n()) + " " + std::to_string(a.n()) + " " + std::to_string(a.nnz()) + "\n";
  for (Index i = 0; i < a.n(); ++i) {
    const auto cols = a.row_cols(i);
    const auto vals = a.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      text += std::to_string(i + 1);
      text += ' ';
      text += std::to_string(cols[k] + 1);
      text += ' ';
      append_double(text, vals[k]);
      text += '\n';
    }
  }
  out << text;
}

void write_matrix_market(const std::string &path, const CsrLowerTriangular &a) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot write '" + path + "'");
  }
  write_matrix_market(out, a);
  if (!out) {
    throw Error("write to '" + path + "' failed");
  }
}

void write_vector(std::ostream &out, std::span<const double> v) {
  std::string text;
  for (double value : v) {
    append_double(text, value);
    text += '\n';
  }
  out << text;
}

DenseVector read_vector(std::istream &in) {
  DenseVector v;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) {
      continue;
    }
    std::string_view rest = line;
    v.push_back(next_number<double>(rest, line_no));
  }
  return v;
}

} // namespace sptrsv
