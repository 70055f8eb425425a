#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "drmel/basis.hpp"

namespace drmel {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// m+1 samples pooled into one array, group 0 first. The basis matrix Q
// (one row per pooled observation) is evaluated once at construction.
class MultiSampleData {
 public:
  // Validates every observation against the basis; a violation raises
  // DataError naming the group and index within the group.
  static MultiSampleData build(const std::vector<std::vector<double>>& groups, BasisSpec basis,
                               std::vector<std::string> labels = {});

  // Resampled copy: rows[k] lists within-group indices drawn for group k.
  // Basis rows are gathered, not re-evaluated.
  MultiSampleData gather(const std::vector<std::vector<std::size_t>>& rows) const;

  std::size_t num_groups() const { return sizes_.size(); }
  std::size_t m() const { return sizes_.size() - 1; }
  std::size_t d() const { return basis_.dim(); }
  std::size_t n() const { return values_.size(); }

  std::size_t group_size(std::size_t k) const { return sizes_[k]; }
  const std::vector<std::size_t>& group_sizes() const { return sizes_; }
  std::size_t group_offset(std::size_t k) const { return offsets_[k]; }
  std::size_t group_of(std::size_t i) const { return group_index_[i]; }

  const std::vector<double>& rho() const { return rho_; }
  const std::vector<double>& log_rho() const { return log_rho_; }

  const BasisSpec& basis() const { return basis_; }
  const std::vector<std::string>& labels() const { return labels_; }

  const std::vector<double>& values() const { return values_; }
  std::span<const double> group_values(std::size_t k) const {
    return {values_.data() + offsets_[k], sizes_[k]};
  }

  const RowMatrix& Q() const { return q_; }
  // Row k: sum of basis rows of group k.
  const Eigen::MatrixXd& group_q_sums() const { return group_q_sums_; }

  // Pooled indices sorted by value (stable).
  const std::vector<std::size_t>& sorted_order() const { return sorted_order_; }

 private:
  MultiSampleData() = default;
  void finalize(bool sort = true);

  BasisSpec basis_{{BasisTerm::constant()}};
  std::vector<std::string> labels_;
  std::vector<double> values_;
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> group_index_;
  std::vector<double> rho_;
  std::vector<double> log_rho_;
  RowMatrix q_;
  Eigen::MatrixXd group_q_sums_;
  std::vector<std::size_t> sorted_order_;
};

// theta_1..theta_m stacked as rows of an m x d matrix; theta_0 = 0 is implicit.
// The flat layout orders block r = 1..m, each block holding d coordinates.
class ParamBlock {
 public:
  ParamBlock() = default;
  explicit ParamBlock(Eigen::MatrixXd theta);

  static ParamBlock zeros(std::size_t m, std::size_t d);
  static ParamBlock from_flat(std::size_t m, std::size_t d, const Eigen::VectorXd& flat);

  std::size_t m() const { return static_cast<std::size_t>(theta_.rows()); }
  std::size_t d() const { return static_cast<std::size_t>(theta_.cols()); }
  std::size_t size() const { return m() * d(); }

  const Eigen::MatrixXd& matrix() const { return theta_; }
  Eigen::VectorXd flat() const;

  // Group r in 1..m, coordinate s in 0..d-1.
  double operator()(std::size_t r, std::size_t s) const {
    return theta_(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(s));
  }
  double& operator()(std::size_t r, std::size_t s) {
    return theta_(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(s));
  }

  bool all_finite() const { return theta_.allFinite(); }

 private:
  Eigen::MatrixXd theta_;
};

}  // namespace drmel
