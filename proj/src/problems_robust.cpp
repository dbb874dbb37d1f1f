#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "minimax/errors.hpp"
#include "minimax/problems.hpp"

namespace minimax {

namespace {

// log(1 + exp(-z)) without overflow on either tail
double logistic_loss(double z) {
  if (z >= 0.0) return std::log1p(std::exp(-z));
  return -z + std::log1p(std::exp(z));
}

// d/dmargin of the loss at margin m with label l, z = l*m
double logistic_slope(double z, double label) { return -label / (1.0 + std::exp(z)); }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) {
    const auto b = cur.find_first_not_of(" \t\r");
    const auto e = cur.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cur.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("dataset line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
}

}  // namespace

RobustWeightedLoss::RobustWeightedLoss(std::vector<GroupDataset> groups, double varrho_reg)
    : groups_(std::move(groups)), varrho_reg_(varrho_reg) {
  MM_CHECK(varrho_reg_ > 0.0, "simplex regularizer must be positive");
  MM_CHECK(groups_.size() >= 2, "need at least two groups");
  const std::size_t k = groups_.front().features.cols;
  MM_CHECK(k >= 1, "empty feature vectors");
  double r_max_sq = 0.0;
  for (const auto& g : groups_) {
    MM_CHECK(g.features.cols == k, "inconsistent feature dimension across groups");
    MM_CHECK(g.features.rows >= 1, "empty group");
    MM_CHECK(g.labels.size() == g.features.rows, "label count does not match rows");
    for (int lab : g.labels) MM_CHECK(lab == 1 || lab == -1, "labels must be +1/-1");
    for (std::size_t r = 0; r < g.features.rows; ++r) {
      double s = 1.0;  // bias coordinate
      for (std::size_t c = 0; c < k; ++c) s += g.features.at(r, c) * g.features.at(r, c);
      r_max_sq = std::max(r_max_sq, s);
    }
  }
  const std::size_t n = groups_.size();
  spec_.d1 = k + 1;
  spec_.d2 = n;
  spec_.mu = 2.0 * varrho_reg_;
  spec_.sigma = 0.0;  // filled below from the reference point
  // logistic curvature r^2/4 per group, cross block bounded by sqrt(n) r,
  // and the u-block contributes 2*varrho
  const double r_max = std::sqrt(r_max_sq);
  spec_.l_f = 0.25 * r_max_sq + std::sqrt(static_cast<double>(n)) * r_max + 2.0 * varrho_reg_;
  spec_.x_set = ConstraintSet::unconstrained(spec_.d1);
  spec_.y_set = ConstraintSet::simplex(n);

  // per-sample gradient variance at w = 0, u = 1/n; group indices are drawn
  // independently, so the x-side variance splits per group
  const Vector w0 = zeros(spec_.d1);
  const double inv_n = 1.0 / static_cast<double>(n);
  double var_x = 0.0, var_y = 0.0;
  Vector gbar(spec_.d1), gj(spec_.d1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t m = groups_[i].features.rows;
    gbar = group_loss_grad(i, w0);
    double acc = 0.0, lbar = 0.0, lacc = 0.0;
    for (std::size_t j = 0; j < m; ++j) lbar += sample_loss(i, j, w0);
    lbar /= static_cast<double>(m);
    for (std::size_t j = 0; j < m; ++j) {
      sample_grad(i, j, w0, gj);
      axpy(-1.0, gbar, gj);
      acc += norm2_sq(gj);
      const double dl = sample_loss(i, j, w0) - lbar;
      lacc += dl * dl;
    }
    var_x += inv_n * inv_n * acc / static_cast<double>(m);
    var_y += lacc / static_cast<double>(m);
  }
  spec_.sigma = std::sqrt(var_x + var_y);
}

double RobustWeightedLoss::sample_loss(std::size_t group, std::size_t row,
                                       const Vector& w) const {
  const auto& g = groups_[group];
  const std::size_t k = g.features.cols;
  double margin = w[k];
  for (std::size_t c = 0; c < k; ++c) margin += w[c] * g.features.at(row, c);
  return logistic_loss(static_cast<double>(g.labels[row]) * margin);
}

void RobustWeightedLoss::sample_grad(std::size_t group, std::size_t row, const Vector& w,
                                     Vector& out) const {
  const auto& g = groups_[group];
  const std::size_t k = g.features.cols;
  double margin = w[k];
  for (std::size_t c = 0; c < k; ++c) margin += w[c] * g.features.at(row, c);
  const double label = static_cast<double>(g.labels[row]);
  const double coef = logistic_slope(label * margin, label);
  out.assign(spec_.d1, 0.0);
  for (std::size_t c = 0; c < k; ++c) out[c] = coef * g.features.at(row, c);
  out[k] = coef;
}

Vector RobustWeightedLoss::group_losses(const Vector& w) const {
  check_dim(w, spec_.d1, "w");
  Vector out(groups_.size());
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    const std::size_t m = groups_[i].features.rows;
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += sample_loss(i, j, w);
    out[i] = s / static_cast<double>(m);
  }
  return out;
}

Vector RobustWeightedLoss::group_loss_grad(std::size_t group, const Vector& w) const {
  MM_CHECK(group < groups_.size(), "group index out of range");
  check_dim(w, spec_.d1, "w");
  const std::size_t m = groups_[group].features.rows;
  Vector acc = zeros(spec_.d1), gj(spec_.d1);
  for (std::size_t j = 0; j < m; ++j) {
    sample_grad(group, j, w, gj);
    axpy(1.0, gj, acc);
  }
  return scaled(acc, 1.0 / static_cast<double>(m));
}

double RobustWeightedLoss::value_impl(const Vector& x, const Vector& y) const {
  const Vector losses = group_losses(x);
  const double inv_n = 1.0 / static_cast<double>(groups_.size());
  double v = 0.0, pen = 0.0;
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    v += y[i] * losses[i];
    const double d = y[i] - inv_n;
    pen += d * d;
  }
  return v - varrho_reg_ * pen;
}

void RobustWeightedLoss::grad_impl(const Vector& x, const Vector& y, Vector& gx,
                                   Vector& gy) const {
  const std::size_t n = groups_.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  gx = zeros(spec_.d1);
  gy.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    axpy(y[i], group_loss_grad(i, x), gx);
    gy[i] = -2.0 * varrho_reg_ * (y[i] - inv_n);
  }
  const Vector losses = group_losses(x);
  for (std::size_t i = 0; i < n; ++i) gy[i] += losses[i];
}

MiniBatch RobustWeightedLoss::draw_batch(RngStream& rng, std::size_t q) const {
  MM_CHECK(q >= 1, "batch size must be positive");
  MiniBatch b;
  b.size = q;
  b.indices.reserve(q * groups_.size());
  for (std::size_t s = 0; s < q; ++s)
    for (const auto& g : groups_) b.indices.push_back(rng.next_index(g.features.rows));
  return b;
}

void RobustWeightedLoss::grad_batch_impl(const Vector& x, const Vector& y,
                                         const MiniBatch& batch, Vector& gx, Vector& gy) const {
  const std::size_t n = groups_.size();
  MM_CHECK(batch.indices.size() == batch.size * n, "batch payload does not match this family");
  const double inv_n = 1.0 / static_cast<double>(n);
  gx = zeros(spec_.d1);
  gy.assign(n, 0.0);
  Vector gj(spec_.d1);
  for (std::size_t s = 0; s < batch.size; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t row = batch.indices[s * n + i];
      MM_CHECK(row < groups_[i].features.rows, "sample index out of range");
      sample_grad(i, row, x, gj);
      axpy(y[i], gj, gx);
      gy[i] += sample_loss(i, row, x);
    }
  }
  const double inv_q = 1.0 / static_cast<double>(batch.size);
  for (auto& v : gx) v *= inv_q;
  for (std::size_t i = 0; i < n; ++i) gy[i] = gy[i] * inv_q - 2.0 * varrho_reg_ * (y[i] - inv_n);
}

Vector RobustWeightedLoss::y_star(const Vector& x) const {
  check_dim(x, spec_.d1, "x");
  check_finite(x, "x");
  const Vector losses = group_losses(x);
  const double inv_n = 1.0 / static_cast<double>(groups_.size());
  Vector u(groups_.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    u[i] = inv_n + losses[i] / (2.0 * varrho_reg_);
  return project(spec_.y_set, u);
}

Vector RobustWeightedLoss::grad_F_exact(const Vector& x) const {
  const Vector u = y_star(x);
  Vector gx = zeros(spec_.d1);
  for (std::size_t i = 0; i < groups_.size(); ++i) axpy(u[i], group_loss_grad(i, x), gx);
  return gx;
}

Vector RobustWeightedLoss::initial_x() const { return zeros(spec_.d1); }

Vector RobustWeightedLoss::initial_y() const {
  return Vector(groups_.size(), 1.0 / static_cast<double>(groups_.size()));
}

RobustWeightedLoss RobustWeightedLoss::make_synthetic(std::size_t per_group, double varrho_reg,
                                                      std::uint64_t data_seed) {
  MM_CHECK(per_group >= 2, "need at least two samples per group");
  RngStream gen(data_seed, 2000);
  // two well-separated groups along nearby directions, one tight group
  // rotated against them so reweighting has something to trade off
  const double angles[3] = {0.0, 0.35, 2.2};
  const double seps[3] = {3.0, 3.0, 1.2};
  std::vector<GroupDataset> groups;
  for (int i = 0; i < 3; ++i) {
    GroupDataset g;
    g.features = Matrix(per_group, 2);
    g.labels.resize(per_group);
    const double dx = std::cos(angles[i]), dy = std::sin(angles[i]);
    for (std::size_t r = 0; r < per_group; ++r) {
      const double lab = r < per_group / 2 ? 1.0 : -1.0;
      g.labels[r] = static_cast<int>(lab);
      g.features.at(r, 0) = lab * 0.5 * seps[i] * dx + gen.normal();
      g.features.at(r, 1) = lab * 0.5 * seps[i] * dy + gen.normal();
    }
    groups.push_back(std::move(g));
  }
  return RobustWeightedLoss(std::move(groups), varrho_reg);
}

RobustWeightedLoss RobustWeightedLoss::from_csv(const std::string& path, double varrho_reg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty dataset: " + path);
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "group_id" || header[1] != "label")
    throw ConfigError("dataset header must start with group_id,label,feature_1,...");
  const std::size_t k = header.size() - 2;
  for (std::size_t c = 0; c < k; ++c)
    if (header[2 + c] != "feature_" + std::to_string(c + 1))
      throw ConfigError("dataset header: expected feature_" + std::to_string(c + 1) +
                        ", got '" + header[2 + c] + "'");

  std::map<long, GroupDataset> by_id;
  std::map<long, std::vector<Vector>> rows_by_id;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ConfigError("dataset line " + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields, got " +
                        std::to_string(cells.size()));
    const long gid = static_cast<long>(parse_double(cells[0], line_no));
    const double raw_label = parse_double(cells[1], line_no);
    int lab;
    if (raw_label == 1.0) lab = 1;
    else if (raw_label == 0.0 || raw_label == -1.0) lab = -1;
    else throw ConfigError("dataset line " + std::to_string(line_no) + ": label must be 0/1 or -1/+1");
    Vector feat(k);
    for (std::size_t c = 0; c < k; ++c) feat[c] = parse_double(cells[2 + c], line_no);
    by_id[gid].labels.push_back(lab);
    rows_by_id[gid].push_back(std::move(feat));
  }
  if (by_id.empty()) throw ConfigError("dataset has no rows: " + path);
  long expect = 0;
  std::vector<GroupDataset> groups;
  for (auto& [gid, g] : by_id) {
    if (gid != expect)
      throw ConfigError("group ids must be contiguous from 0; missing group " +
                        std::to_string(expect));
    ++expect;
    const auto& rows = rows_by_id[gid];
    g.features = Matrix(rows.size(), k);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < k; ++c) g.features.at(r, c) = rows[r][c];
    groups.push_back(std::move(g));
  }
  return RobustWeightedLoss(std::move(groups), varrho_reg);
}

}  // namespace minimax
