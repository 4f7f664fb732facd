#include "multicmh/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace multicmh {

std::vector<std::uint32_t> rank_transform(std::span<const double> values) {
  if (values.empty()) throw InputError("rank_transform: empty sequence");
  const std::size_t n = values.size();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  // Stable sort on value keeps ties in original-index order.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return values[a] < values[b]; });
  std::vector<std::uint32_t> ranks(n);
  for (std::size_t r = 0; r < n; ++r) ranks[order[r]] = static_cast<std::uint32_t>(r + 1);
  return ranks;
}

bool detect_binary(std::span<const double> values) {
  double first = values[0];
  bool second_seen = false;
  double second = 0.0;
  for (double v : values) {
    if (v == first) continue;
    if (!second_seen) {
      second = v;
      second_seen = true;
    } else if (v != second) {
      return false;
    }
  }
  return true;
}

namespace {

void check_finite(std::span<const double> col, const std::string& name) {
  for (std::size_t i = 0; i < col.size(); ++i)
    if (!std::isfinite(col[i]))
      throw InputError("non-finite value in column '" + name + "' at row " +
                       std::to_string(i + 1));
}

Arity resolve_arity(std::span<const double> col, std::optional<Arity> override_arity,
                    const std::string& name) {
  if (override_arity) {
    if (*override_arity == Arity::binary && !detect_binary(col))
      throw InputError("column '" + name + "' declared binary but has >2 distinct values");
    return *override_arity;
  }
  return detect_binary(col) ? Arity::binary : Arity::continuous;
}

}  // namespace

Dataset make_dataset(std::vector<double> x, std::vector<double> y, std::vector<double> z,
                     std::size_t d, std::optional<Arity> x_arity,
                     std::optional<Arity> y_arity) {
  Dataset ds;
  ds.n = x.size();
  ds.d = d;
  if (ds.n == 0) throw InputError("dataset has no rows");
  if (d == 0) throw InputError("dataset needs at least one z column");
  if (y.size() != ds.n || z.size() != ds.n * d)
    throw InputError("dataset column lengths disagree");
  check_finite(x, "x");
  check_finite(y, "y");
  for (std::size_t i = 0; i < z.size(); ++i)
    if (!std::isfinite(z[i]))
      throw InputError("non-finite value in column 'z" + std::to_string(i % d + 1) +
                       "' at row " + std::to_string(i / d + 1));
  ds.x = std::move(x);
  ds.y = std::move(y);
  ds.z = std::move(z);
  ds.x_arity = resolve_arity(ds.x, x_arity, "x");
  ds.y_arity = resolve_arity(ds.y, y_arity, "y");
  return ds;
}

Dataset ingest(const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows, const ColumnSpec& spec) {
  auto column_index = [&](const std::string& name) -> std::size_t {
    for (std::size_t j = 0; j < header.size(); ++j)
      if (header[j] == name) return j;
    throw InputError("missing column '" + name + "'");
  };
  if (spec.z_names.empty()) throw InputError("at least one z column is required");
  if (rows.empty()) throw InputError("input has no data rows");

  const std::size_t xi = column_index(spec.x_name);
  const std::size_t yi = column_index(spec.y_name);
  std::vector<std::size_t> zi;
  zi.reserve(spec.z_names.size());
  for (const auto& zn : spec.z_names) zi.push_back(column_index(zn));

  const std::size_t n = rows.size();
  const std::size_t d = zi.size();
  std::vector<double> x(n), y(n), z(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i];
    if (row.size() != header.size())
      throw InputError("row " + std::to_string(i + 1) + " has " +
                       std::to_string(row.size()) + " cells, expected " +
                       std::to_string(header.size()));
    x[i] = row[xi];
    y[i] = row[yi];
    for (std::size_t j = 0; j < d; ++j) z[i * d + j] = row[zi[j]];
    if (!std::isfinite(x[i]))
      throw InputError("non-finite value in column '" + spec.x_name + "' at row " +
                       std::to_string(i + 1));
    if (!std::isfinite(y[i]))
      throw InputError("non-finite value in column '" + spec.y_name + "' at row " +
                       std::to_string(i + 1));
    for (std::size_t j = 0; j < d; ++j)
      if (!std::isfinite(z[i * d + j]))
        throw InputError("non-finite value in column '" + spec.z_names[j] + "' at row " +
                         std::to_string(i + 1));
  }
  return make_dataset(std::move(x), std::move(y), std::move(z), d, spec.x_arity,
                      spec.y_arity);
}

}  // namespace multicmh
