#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "densefeat/descriptor.hpp"

namespace densefeat {

PcaModel pca_train(std::span<const Descriptor> descs) {
  if (descs.size() < kMinPcaSamples) {
    throw std::invalid_argument("pca_train needs at least 256 descriptors");
  }
  constexpr int dim = kSiftDim;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (const auto& d : descs) {
    if (d.state != DescriptorState::RootSift) {
      throw std::logic_error("pca_train expects rootsift descriptors");
    }
    mean += Eigen::Map<const Eigen::VectorXd>(d.values.data(), dim);
  }
  mean /= static_cast<double>(descs.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& d : descs) {
    const Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(d.values.data(), dim) - mean;
    cov.selfadjointView<Eigen::Lower>().rankUpdate(c);
  }
  cov = cov.selfadjointView<Eigen::Lower>();
  cov /= static_cast<double>(descs.size());

  // Eigenvalues come back ascending; reverse for descending variance.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  const Eigen::MatrixXd vecs = solver.eigenvectors().rowwise().reverse();

  PcaModel model;
  model.dim = dim;
  model.mean.assign(mean.data(), mean.data() + dim);
  model.rotation.assign(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int j = 0; j < dim; ++j) {
    Eigen::VectorXd v = vecs.col(j);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    for (int i = 0; i < dim; ++i) model.rotation[static_cast<std::size_t>(i) * dim + j] = v(i);
  }
  return model;
}

std::array<double, kSiftDim> pca_rotate(const PcaModel& model, const Descriptor& d) {
  std::array<double, kSiftDim> centered{};
  for (int i = 0; i < kSiftDim; ++i) centered[i] = d.values[i] - model.mean[i];
  std::array<double, kSiftDim> out{};
  for (int i = 0; i < kSiftDim; ++i) {
    const double c = centered[i];
    if (c == 0.0) continue;
    const double* row = &model.rotation[static_cast<std::size_t>(i) * kSiftDim];
    for (int j = 0; j < kSiftDim; ++j) out[j] += row[j] * c;
  }
  return out;
}

Descriptor pca_apply(const PcaModel& model, const Descriptor& d) {
  if (d.state != DescriptorState::RootSift) throw std::logic_error("pca_apply expects rootsift input");
  Descriptor out = d;
  out.state = DescriptorState::Pca;
  out.values = pca_rotate(model, d);
  double n = 0.0;
  for (double v : out.values) n += v * v;
  n = std::sqrt(n);
  if (n > 0.0)
    for (double& v : out.values) v /= n;
  return out;
}

}  // namespace densefeat
