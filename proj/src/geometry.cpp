#include "ermlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ermlab/rng.hpp"

namespace ermlab {

namespace {

constexpr int kRepairBatch = 20000;
constexpr int kAscentProbes = 1200;
constexpr int kAscentSteps = 60;

double min_distance(const std::vector<Vec>& points, const Vec& x) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& p : points) best = std::min(best, (x - p).norm());
  return best;
}

const Vec& nearest_point(const std::vector<Vec>& points, const Vec& x) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double dist = (x - points[j]).norm();
    if (dist < best) {
      best = dist;
      arg = j;
    }
  }
  return points[arg];
}

// Hill-climbs x inside B(0, radius) to increase its distance to the net.
// Finds coverage pockets far more efficiently than uniform sampling: the
// basin of a pocket is much larger than the pocket itself.
Vec climb_to_pocket(const std::vector<Vec>& points, Vec x, double radius,
                    double scale) {
  double step = 0.5 * scale;
  double value = min_distance(points, x);
  for (int it = 0; it < kAscentSteps && step > 1e-3 * scale; ++it) {
    const Vec& p = nearest_point(points, x);
    Vec dir = x - p;
    const double norm = dir.norm();
    if (norm == 0.0) break;
    Vec cand = x + (step / norm) * dir;
    const double cnorm = cand.norm();
    if (cnorm > radius) cand *= radius / cnorm;
    const double cval = min_distance(points, cand);
    if (cval > value) {
      x = std::move(cand);
      value = cval;
    } else {
      step *= 0.5;
    }
  }
  return x;
}

}  // namespace

bool Ball::contains(const Vec& w, double slack) const {
  if (w.size() != center.size()) throw DimMismatch("Ball: dimension mismatch");
  return (w - center).norm() <= radius + slack;
}

Vec project_to_ball(const Ball& b, const Vec& w) {
  if (w.size() != b.center.size())
    throw DimMismatch("project_to_ball: dimension mismatch");
  const Vec offset = w - b.center;
  const double norm = offset.norm();
  if (norm <= b.radius) return w;
  return b.center + (b.radius / norm) * offset;
}

bool annulus_membership(const Annulus& ann, const Vec& w) {
  if (w.size() != ann.center_point.size())
    throw DimMismatch("annulus_membership: dimension mismatch");
  if (!ann.base.contains(w)) return false;
  const double dist = ann.seminorm.seminorm(w - ann.center_point);
  return dist >= ann.inner - 1e-12 && dist <= ann.outer + 1e-12;
}

std::vector<Vec> build_euclidean_net(int dim, double radius, double scale,
                                     std::uint64_t rng_seed) {
  if (scale <= 0.0 || scale > radius)
    throw ScaleOutOfRange("build_euclidean_net: need 0 < scale <= radius");
  if (dim <= 0) return {Vec::Zero(0)};

  Rng rng(rng_seed);
  const Vec origin = Vec::Zero(dim);
  std::vector<Vec> points{origin};

  // Greedy packing from uniform proposals.
  const int max_stall = 200 * dim;
  int stall = 0;
  while (stall < max_stall) {
    Vec proposal = rng.uniform_in_ball(origin, radius);
    if (min_distance(points, proposal) > scale) {
      points.push_back(std::move(proposal));
      stall = 0;
    } else {
      ++stall;
    }
  }

  // Repair until a full pass of fresh samples and pocket probes adds
  // nothing; afterwards no sampled point of the ball is farther than
  // `scale` from the net.
  for (bool clean = false; !clean;) {
    clean = true;
    for (int i = 0; i < kRepairBatch; ++i) {
      Vec probe = rng.uniform_in_ball(origin, radius);
      if (min_distance(points, probe) > scale) {
        points.push_back(std::move(probe));
        clean = false;
      }
    }
    for (int i = 0; i < kAscentProbes; ++i) {
      Vec probe = climb_to_pocket(
          points, rng.uniform_in_ball(origin, radius), radius, scale);
      if (min_distance(points, probe) > scale) {
        points.push_back(std::move(probe));
        clean = false;
      }
    }
  }
  return points;
}

Vec seminorm_project_to_ball(const PsdSeminorm& s, const Ball& ball,
                             const Vec& x) {
  Vec q = project_to_ball(ball, x);
  const double lambda_top = s.eigenvalues().size() > 0 ? s.eigenvalues()[0] : 0.0;
  if (lambda_top <= 0.0) return q;
  const double step = 0.5 / lambda_top;
  for (int it = 0; it < 50000; ++it) {
    const Vec grad = 2.0 * (s.matrix() * (q - x));
    Vec next = project_to_ball(ball, q - step * grad);
    const double moved = (next - q).norm();
    q = std::move(next);
    if (moved <= 1e-15 * std::max(1.0, ball.radius)) break;
  }
  return q;
}

SeminormNet cover_annulus(const Annulus& ann, double scale,
                          std::uint64_t rng_seed) {
  if (ann.inner != 0.0)
    throw Error("cover_annulus: requires inner radius 0");
  const double r = ann.outer;
  if (scale <= 0.0 || scale > r)
    throw ScaleOutOfRange("cover_annulus: need 0 < scale <= outer");

  const PsdSeminorm& h = ann.seminorm;
  const int rank = h.rank();
  SeminormNet net;
  net.scale = scale;
  net.certificate = std::pow(6.0 * r / scale, h.dim());

  if (rank == 0) {
    // Degenerate seminorm: every point is at distance 0 from any center.
    net.points.push_back(project_to_ball(ann.base, ann.center_point));
    return net;
  }

  // Work in range(H): images a = H^{1/2}(w - w*) of W[0, r] live in the
  // rank-dimensional ball of radius r, so a net of that ball suffices.
  const Mat basis = h.range_basis();
  std::vector<Vec> coords = build_euclidean_net(rank, r, scale, rng_seed);
  net.points.reserve(coords.size());
  for (const Vec& c : coords) {
    Vec p = ann.center_point + h.apply_pinv_sqrt(basis * c);
    if (!ann.base.contains(p)) p = seminorm_project_to_ball(h, ann.base, p);
    net.points.push_back(std::move(p));
  }
  return net;
}

double net_distance(const SeminormNet& net, const PsdSeminorm& s,
                    const Vec& w) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& p : net.points) best = std::min(best, s.seminorm(w - p));
  return best;
}

}  // namespace ermlab
