// End-to-end walk through the library on a synthetic configuration: simulate
// noisy squared distances, embed, build plug-in and bootstrap confidence sets,
// and check whether the aligned truth falls inside each.
//
//   demo_confset [n] [sigma] [seed]

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <string>

#include "noisy_mds/noisy_mds.hpp"

using namespace noisy_mds;

int main(int argc, char** argv) {
  const long n = argc > 1 ? std::atol(argv[1]) : 200;
  const double sigma = argc > 2 ? std::atof(argv[2]) : 1.0;
  const std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 7;
  const double alpha = 0.1;
  const int B = 500;

  try {
    SeededRng rng(seed, 0);
    SeededRng latent_rng = rng.child(0);
    SeededRng noise_rng = rng.child(1);
    const Configuration x = generate_latent(LatentKind::Ellipse, static_cast<int>(n), 2, latent_rng);
    const SymmetricMatrix d = noisy_dissimilarities(squared_distance_matrix(x), {NoiseKind::Additive, sigma, false},
                                                    noise_rng);

    const Embedding e = mds_embed(d, 2);
    const TruthAlignment align = align_truth_to_embedding(x, e);
    const ResidualMatrix r = residuals(d, e);
    const SandwichCovariances om = omega_plugin(e, r);

    std::cout << std::fixed << std::setprecision(4);
    std::cout << "n = " << n << ", additive noise sigma = " << sigma << ", alpha = " << alpha << "\n";
    std::cout << "eigenvalues: " << e.eigenvalues.transpose() << "\n";
    std::cout << "residual variance: " << r.variance << "\n";
    std::cout << "T (plug-in covariances, aligned truth): " << statistic_T(align.aligned, e, om) << "\n\n";

    const ConfidenceSet plug = plugin_confidence_set(e, om, alpha);
    std::cout << std::left << std::setw(22) << "method" << std::setw(10) << "radius" << "covers truth\n";
    std::cout << std::setw(22) << "plugin (Gumbel)" << std::setw(10) << plug.radius
              << (plug.contains_all(align.aligned) ? "yes" : "no") << "\n";

    BootstrapOptions bo;
    bo.threads = default_threads();
    for (const BootstrapMethod& m : {BootstrapMethod::multiplier(MultiplierFamily::Gaussian),
                                     BootstrapMethod::multiplier(MultiplierFamily::Rademacher),
                                     BootstrapMethod::empirical()}) {
      const BootstrapResult res = run_bootstrap(e, r, om, m, B, alpha, seed, bo);
      std::cout << std::setw(22) << m.label() << std::setw(10) << res.set.radius
                << (res.set.contains_all(align.aligned) ? "yes" : "no") << "\n";
    }

    const EllipsoidExport ex = export_ellipsoids(plug, 8);
    std::cout << "\nfirst plug-in ellipse (8 boundary points) around " << ex.items[0].center.transpose() << ":\n";
    for (Eigen::Index k = 0; k < ex.items[0].boundary.rows(); ++k)
      std::cout << "  " << ex.items[0].boundary.row(k) << "\n";
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return exit_code(err.kind());
  }
  return 0;
}
