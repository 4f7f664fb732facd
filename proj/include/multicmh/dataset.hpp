#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace multicmh {

/// Raised on malformed or invalid input data; mapped to exit code 2 by the CLI.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Arity { binary, continuous };

/// Immutable sample of n rows (x_i, y_i, z_i1..z_id).
struct Dataset {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z;  // row-major, n * d
  Arity x_arity = Arity::continuous;
  Arity y_arity = Arity::continuous;

  double z_at(std::size_t row, std::size_t col) const { return z[row * d + col]; }
};

struct ColumnSpec {
  std::string x_name;
  std::string y_name;
  std::vector<std::string> z_names;
  std::optional<Arity> x_arity;  // override; auto-detected when absent
  std::optional<Arity> y_arity;
};

/// Builds a validated Dataset from row-major tabular data with a header.
/// Arity is auto-detected (<= 2 distinct values => binary) unless overridden.
/// Throws InputError naming the offending row/column on non-finite cells,
/// missing columns, or an empty table.
Dataset ingest(const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows,
               const ColumnSpec& spec);

/// Builds a Dataset directly from columns, with auto-detected arity.
Dataset make_dataset(std::vector<double> x, std::vector<double> y,
                     std::vector<double> z, std::size_t d,
                     std::optional<Arity> x_arity = std::nullopt,
                     std::optional<Arity> y_arity = std::nullopt);

/// Ranks 1..n on the empirical scale; ties broken by stable original-index
/// order, so the result is a permutation and is invariant under strictly
/// increasing transforms of the input.
std::vector<std::uint32_t> rank_transform(std::span<const double> values);

/// True when the column holds at most two distinct values.
bool detect_binary(std::span<const double> values);

}  // namespace multicmh
