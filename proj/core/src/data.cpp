#include "drmel/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "drmel/error.hpp"

namespace drmel {

MultiSampleData MultiSampleData::build(const std::vector<std::vector<double>>& groups,
                                       BasisSpec basis, std::vector<std::string> labels) {
  if (groups.size() < 2) {
    throw DataError("at least two groups are required (baseline plus one more)");
  }
  if (!labels.empty() && labels.size() != groups.size()) {
    throw DataError("label count does not match group count");
  }
  MultiSampleData data;
  data.basis_ = std::move(basis);
  if (labels.empty()) {
    for (std::size_t k = 0; k < groups.size(); ++k) labels.push_back(std::to_string(k));
  }
  data.labels_ = std::move(labels);

  std::size_t total = 0;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    if (groups[k].empty()) throw DataError("group " + data.labels_[k] + " is empty");
    total += groups[k].size();
  }
  data.values_.reserve(total);
  for (std::size_t k = 0; k < groups.size(); ++k) {
    data.sizes_.push_back(groups[k].size());
    for (std::size_t j = 0; j < groups[k].size(); ++j) {
      double x = groups[k][j];
      if (auto why = data.basis_.domain_violation(x)) {
        std::ostringstream os;
        os << "group " << data.labels_[k] << " observation " << j << " (value " << x
           << "): " << *why;
        throw DataError(os.str(), data.values_.size());
      }
      data.values_.push_back(x);
    }
  }

  const auto n = data.values_.size();
  const auto d = data.basis_.dim();
  data.q_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    data.basis_.eval_into(data.values_[i], {data.q_.row(static_cast<Eigen::Index>(i)).data(), d});
  }
  data.finalize();
  return data;
}

MultiSampleData MultiSampleData::gather(const std::vector<std::vector<std::size_t>>& rows) const {
  if (rows.size() != num_groups()) throw DataError("gather: wrong number of groups");
  MultiSampleData out;
  out.basis_ = basis_;
  out.labels_ = labels_;
  std::size_t total = 0;
  for (const auto& r : rows) total += r.size();
  out.values_.reserve(total);
  out.q_.resize(static_cast<Eigen::Index>(total), q_.cols());
  Eigen::Index dst = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].empty()) throw DataError("gather: empty group");
    out.sizes_.push_back(rows[k].size());
    for (std::size_t j : rows[k]) {
      if (j >= sizes_[k]) throw DataError("gather: index out of range");
      const auto src = offsets_[k] + j;
      out.values_.push_back(values_[src]);
      out.q_.row(dst++) = q_.row(static_cast<Eigen::Index>(src));
    }
  }
  out.finalize(false);

  // Walk the source sorted order and emit each source row's copies, so the
  // resample needs no sort of its own.
  const auto n_src = values_.size();
  std::vector<std::size_t> start(n_src + 1, 0);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t j : rows[k]) ++start[offsets_[k] + j + 1];
  }
  for (std::size_t i = 0; i < n_src; ++i) start[i + 1] += start[i];
  std::vector<std::size_t> copies(total), fill(start.begin(), start.end() - 1);
  std::size_t pos = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t j : rows[k]) copies[fill[offsets_[k] + j]++] = pos++;
  }
  out.sorted_order_.clear();
  out.sorted_order_.reserve(total);
  for (std::size_t src : sorted_order_) {
    for (std::size_t c = start[src]; c < start[src + 1]; ++c) out.sorted_order_.push_back(copies[c]);
  }
  return out;
}

void MultiSampleData::finalize(bool sort) {
  const auto groups = sizes_.size();
  const auto n = values_.size();
  offsets_.assign(groups, 0);
  for (std::size_t k = 1; k < groups; ++k) offsets_[k] = offsets_[k - 1] + sizes_[k - 1];
  group_index_.resize(n);
  rho_.resize(groups);
  log_rho_.resize(groups);
  group_q_sums_.setZero(static_cast<Eigen::Index>(groups), q_.cols());
  for (std::size_t k = 0; k < groups; ++k) {
    rho_[k] = static_cast<double>(sizes_[k]) / static_cast<double>(n);
    log_rho_[k] = std::log(rho_[k]);
    for (std::size_t j = 0; j < sizes_[k]; ++j) group_index_[offsets_[k] + j] = k;
    group_q_sums_.row(static_cast<Eigen::Index>(k)) =
        q_.middleRows(static_cast<Eigen::Index>(offsets_[k]), static_cast<Eigen::Index>(sizes_[k]))
            .colwise()
            .sum();
  }
  if (!sort) return;
  if (!sort) return;
  sorted_order_.resize(n);
  std::iota(sorted_order_.begin(), sorted_order_.end(), std::size_t{0});
  std::stable_sort(sorted_order_.begin(), sorted_order_.end(),
                   [&](std::size_t a, std::size_t b) { return values_[a] < values_[b]; });
}

ParamBlock::ParamBlock(Eigen::MatrixXd theta) : theta_(std::move(theta)) {}

ParamBlock ParamBlock::zeros(std::size_t m, std::size_t d) {
  return ParamBlock(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d)));
}

ParamBlock ParamBlock::from_flat(std::size_t m, std::size_t d, const Eigen::VectorXd& flat) {
  if (static_cast<std::size_t>(flat.size()) != m * d) {
    throw ConfigError("parameter vector has wrong length");
  }
  Eigen::MatrixXd theta(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t s = 0; s < d; ++s) {
      theta(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) =
          flat(static_cast<Eigen::Index>(r * d + s));
    }
  }
  return ParamBlock(std::move(theta));
}

Eigen::VectorXd ParamBlock::flat() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(size()));
  for (std::size_t r = 0; r < m(); ++r) {
    for (std::size_t s = 0; s < d(); ++s) {
      out(static_cast<Eigen::Index>(r * d() + s)) =
          theta_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s));
    }
  }
  return out;
}

}  // namespace drmel
