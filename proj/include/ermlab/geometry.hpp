#ifndef ERMLAB_GEOMETRY_HPP
#define ERMLAB_GEOMETRY_HPP

#include <cstdint>
#include <vector>

#include "ermlab/linalg.hpp"

namespace ermlab {

// Euclidean ball, the compact convex reference set used throughout.
struct Ball {
  Vec center;
  double radius = 0.0;

  Ball(Vec c, double r) : center(std::move(c)), radius(r) {
    if (r <= 0.0) throw NonPositiveRadius("Ball: radius <= 0");
  }

  bool contains(const Vec& w, double slack = 1e-12) const;
};

// Euclidean projection onto the ball.
Vec project_to_ball(const Ball& b, const Vec& w);

// Seminorm shell {w in W : inner <= |w - center_point|_H <= outer}.
struct Annulus {
  Ball base;
  Vec center_point;
  PsdSeminorm seminorm;
  double inner = 0.0;
  double outer = 0.0;

  Annulus(Ball b, Vec c, PsdSeminorm s, double a, double bb)
      : base(std::move(b)),
        center_point(std::move(c)),
        seminorm(std::move(s)),
        inner(a),
        outer(bb) {
    if (a < 0.0 || bb < a) throw Error("Annulus: need 0 <= inner <= outer");
  }
};

bool annulus_membership(const Annulus& ann, const Vec& w);

// Covering net of a seminorm ball with its cardinality certificate.
struct SeminormNet {
  std::vector<Vec> points;
  double scale = 0.0;        // covering radius u
  double certificate = 0.0;  // (6 r / u)^d
};

// Greedy maximal u-packing of B(0, radius) in R^dim built from random
// proposals, then repaired until batches of fresh samples and hill-climbing
// probes find no point farther than `scale` from the net. The result is a
// u-cover with |net| <= (1 + 2 radius/scale)^dim.
std::vector<Vec> build_euclidean_net(int dim, double radius, double scale,
                                     std::uint64_t rng_seed);

// Net for W[0, r] in the seminorm of `ann` (requires ann.inner == 0):
// a Euclidean net of the radius-r ball inside range(H), pushed forward
// through (H^+)^{1/2} and re-anchored at the center point. Points that
// land outside the ambient ball are replaced by their seminorm projection
// onto it, which cannot increase covering distances.
SeminormNet cover_annulus(const Annulus& ann, double scale,
                          std::uint64_t rng_seed);

// min_j |w - p_j|_H; infinity for an empty net.
double net_distance(const SeminormNet& net, const PsdSeminorm& s,
                    const Vec& w);

// argmin_{q in ball} |x - q|_H via projected gradient, with exact
// Euclidean fallback when H has full rank equal weights.
Vec seminorm_project_to_ball(const PsdSeminorm& s, const Ball& ball,
                             const Vec& x);

}  // namespace ermlab

#endif  // ERMLAB_GEOMETRY_HPP
