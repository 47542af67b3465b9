#include "kad/synthetic.hpp"

#include "kad/errors.hpp"

namespace kad {

ProbVector dirichlet_draw(Rng& rng, std::size_t vocab_size, double concentration) {
    if (vocab_size < 2)
        throw ParameterOutOfRange("dirichlet_draw: vocab_size must be >= 2");
    if (concentration <= 0.0)
        throw ParameterOutOfRange("dirichlet_draw: concentration must be > 0");
    std::vector<double> raw(vocab_size);
    for (double& x : raw) x = rng.gamma(concentration);
    return ProbVector(std::move(raw));
}

namespace {

ProbVector correlated_draw(Rng& rng, const ProbVector& anchor,
                           const SyntheticConfig& cfg) {
    const ProbVector fresh =
        dirichlet_draw(rng, cfg.vocab_size, cfg.concentration);
    std::vector<double> mixed(cfg.vocab_size);
    for (std::size_t v = 0; v < cfg.vocab_size; ++v)
        mixed[v] = cfg.correlation * anchor[v] + (1.0 - cfg.correlation) * fresh[v];
    return ProbVector(std::move(mixed));
}

} // namespace

InstanceRecord generate_instance(std::uint64_t seed, const SyntheticConfig& cfg) {
    if (cfg.correlation < 0.0 || cfg.correlation > 1.0)
        throw ParameterOutOfRange("generate_instance: correlation must be in [0,1]");
    Rng rng(seed);
    ProbVector p = dirichlet_draw(rng, cfg.vocab_size, cfg.concentration);
    ProbVector q = dirichlet_draw(rng, cfg.vocab_size, cfg.concentration);
    ProbVector ground_truth = dirichlet_draw(rng, cfg.vocab_size, cfg.concentration);
    ProbVector q_star = correlated_draw(rng, p, cfg);
    ProbVector p_star = correlated_draw(rng, p, cfg);

    InstanceRecord rec{0, std::move(p), std::move(q_star)};
    rec.q = std::move(q);
    rec.p_star = std::move(p_star);
    rec.ground_truth = std::move(ground_truth);
    return rec;
}

} // namespace kad
