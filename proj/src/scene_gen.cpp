#include "sse/scene_gen.hpp"

#include <vector>

namespace sse {

namespace {

// Concentration of the per-pixel Dirichlet draws; < 1 gives patchy fields
// with regions dominated by single materials.
constexpr double kDirichletAlpha = 0.3;

void validate(const SceneConfig& cfg) {
  if (cfg.endmembers < 1) throw ConfigInvalid("scene: endmembers must be >= 1");
  if (cfg.bands < 2) throw ConfigInvalid("scene: bands must be >= 2");
  if (cfg.downsample < 1) throw ConfigInvalid("scene: downsample must be >= 1");
  if (cfg.highres_w < cfg.downsample || cfg.highres_h < cfg.downsample ||
      cfg.highres_w % cfg.downsample != 0 || cfg.highres_h % cfg.downsample != 0) {
    throw ConfigInvalid("scene: highres dimensions " + std::to_string(cfg.highres_w) + "x" +
                        std::to_string(cfg.highres_h) + " must be divisible by downsample " +
                        std::to_string(cfg.downsample));
  }
  if (cfg.noise_sigma < 0.0) throw ConfigInvalid("scene: noise_sigma must be >= 0");
  if (cfg.blur_radius < 0) throw ConfigInvalid("scene: blur_radius must be >= 0");
  if (cfg.grid_stride < 1) throw ConfigInvalid("scene: grid_stride must be >= 1");
}

Eigen::MatrixXd draw_endmembers(const SceneConfig& cfg, RandomStream& rng) {
  Eigen::MatrixXd em(cfg.bands, cfg.endmembers);
  const double d = static_cast<double>(cfg.bands);
  for (int k = 0; k < cfg.endmembers; ++k) {
    const double continuum = 0.3 + 0.6 * rng.next_double();
    em.col(k).setConstant(continuum);
    const int features = 2 + rng.next_int(4);
    for (int f = 0; f < features; ++f) {
      const double center = rng.next_double() * (d - 1.0);
      const double lo = std::max(0.8, d / 30.0);
      const double width = lo + rng.next_double() * std::max(0.5, d / 8.0 - lo);
      const double depth = 0.05 + 0.4 * rng.next_double();
      for (int b = 0; b < cfg.bands; ++b) {
        const double z = (b - center) / width;
        em(b, k) -= depth * std::exp(-0.5 * z * z);
      }
    }
    em.col(k) = em.col(k).cwiseMax(0.01).cwiseMin(1.0);
  }
  return em;
}

// Count-normalised separable box blur; each output is the mean of the
// in-bounds window, so a field of ones stays ones.
void box_blur(Eigen::MatrixXd& field, int w, int h, int radius) {
  if (radius <= 0) return;
  Eigen::MatrixXd tmp = field;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double sum = 0.0;
      int count = 0;
      for (int cc = std::max(0, c - radius); cc <= std::min(w - 1, c + radius); ++cc) {
        sum += field(0, r * w + cc);
        ++count;
      }
      tmp(0, r * w + c) = sum / count;
    }
  }
  for (int c = 0; c < w; ++c) {
    for (int r = 0; r < h; ++r) {
      double sum = 0.0;
      int count = 0;
      for (int rr = std::max(0, r - radius); rr <= std::min(h - 1, r + radius); ++rr) {
        sum += tmp(0, rr * w + c);
        ++count;
      }
      field(0, r * w + c) = sum / count;
    }
  }
}

void quantize_f32(Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = static_cast<double>(static_cast<float>(m.data()[i]));
  }
}

}  // namespace

SceneryPair generate_synthetic_scene(const SceneConfig& cfg, std::uint64_t seed) {
  validate(cfg);

  RandomStream root(seed);
  RandomStream em_rng = root.split();
  RandomStream ab_rng = root.split();
  RandomStream noise_rng = root.split();

  const Eigen::MatrixXd endmembers = draw_endmembers(cfg, em_rng);

  const int w = cfg.highres_w;
  const int h = cfg.highres_h;
  const int pixels = w * h;
  const int K = cfg.endmembers;

  // Per-pixel Dirichlet draws, one row-major field per endmember.
  std::vector<Eigen::MatrixXd> fields(static_cast<std::size_t>(K), Eigen::MatrixXd(1, pixels));
  for (int j = 0; j < pixels; ++j) {
    double sum = 0.0;
    for (int k = 0; k < K; ++k) {
      const double g = ab_rng.next_gamma(kDirichletAlpha);
      fields[static_cast<std::size_t>(k)](0, j) = g;
      sum += g;
    }
    for (int k = 0; k < K; ++k) fields[static_cast<std::size_t>(k)](0, j) /= sum;
  }
  for (int k = 0; k < K; ++k) box_blur(fields[static_cast<std::size_t>(k)], w, h, cfg.blur_radius);
  for (int j = 0; j < pixels; ++j) {
    double sum = 0.0;
    for (int k = 0; k < K; ++k) sum += fields[static_cast<std::size_t>(k)](0, j);
    for (int k = 0; k < K; ++k) fields[static_cast<std::size_t>(k)](0, j) /= sum;
  }

  OrbitalImage highres;
  highres.width = w;
  highres.height = h;
  highres.data.resize(cfg.bands, pixels);
  Eigen::VectorXd abun(K);
  for (int j = 0; j < pixels; ++j) {
    for (int k = 0; k < K; ++k) abun(k) = fields[static_cast<std::size_t>(k)](0, j);
    highres.data.col(j) = endmembers * abun;
  }
  if (cfg.noise_sigma > 0.0) {
    for (int j = 0; j < pixels; ++j) {
      for (int b = 0; b < cfg.bands; ++b) {
        highres.data(b, j) += noise_rng.next_gaussian(0.0, cfg.noise_sigma);
      }
    }
  }
  quantize_f32(highres.data);

  const int ds = cfg.downsample;
  OrbitalImage orbital;
  orbital.width = w / ds;
  orbital.height = h / ds;
  orbital.data.resize(cfg.bands, orbital.width * orbital.height);
  for (int r = 0; r < orbital.height; ++r) {
    for (int c = 0; c < orbital.width; ++c) {
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(cfg.bands);
      for (int rr = r * ds; rr < (r + 1) * ds; ++rr) {
        for (int cc = c * ds; cc < (c + 1) * ds; ++cc) {
          mean += highres.data.col(rr * w + cc);
        }
      }
      orbital.data.col(r * orbital.width + c) = mean / static_cast<double>(ds * ds);
    }
  }
  quantize_f32(orbital.data);

  SceneMetadata meta;
  meta.name = cfg.name;
  meta.seed = seed;
  meta.endmembers = K;
  SceneryPair scene = make_scene_pair(std::move(orbital), std::move(highres), cfg.noise_sigma,
                                      cfg.grid_stride, cfg.step_cost, std::move(meta));
  scene.true_endmembers = endmembers;
  return scene;
}

}  // namespace sse
