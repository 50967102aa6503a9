#pragma once

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace nullcorr {

struct WeightConstraintViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parameters of a weighted null-correlation monad on P^{2n+1}:
/// gamma - zeta > lambda_n >= ... >= lambda_0 >= 0, zeta in {0,1}, gamma > 0.
struct Weights {
    int n = 1;
    int zeta = 0;
    int gamma = 1;
    std::vector<int> lambda;  // size n+1, ascending

    Weights() : lambda{0, 0} {}
    Weights(int n_, int zeta_, int gamma_, std::vector<int> lambda_)
        : n(n_), zeta(zeta_), gamma(gamma_), lambda(std::move(lambda_)) {
        validate();
    }

    void validate() const {
        if (n < 1) throw WeightConstraintViolation("n >= 1 required");
        if (zeta != 0 && zeta != 1) throw WeightConstraintViolation("zeta must be 0 or 1");
        if (gamma <= 0) throw WeightConstraintViolation("gamma > 0 required");
        if (static_cast<int>(lambda.size()) != n + 1)
            throw WeightConstraintViolation("lambda must have n+1 entries");
        for (int i = 0; i + 1 <= n; ++i)
            if (lambda[static_cast<size_t>(i)] > lambda[static_cast<size_t>(i + 1)])
                throw WeightConstraintViolation("lambda must be ascending");
        if (lambda.front() < 0) throw WeightConstraintViolation("lambda_0 >= 0 required");
        if (gamma - zeta <= lambda.back())
            throw WeightConstraintViolation("gamma - zeta > lambda_n required");
    }

    int proj_dim() const { return 2 * n + 1; }      // the ambient projective space P^{2n+1}
    int num_vars() const { return 2 * n + 2; }
    int lambda_sum() const { return std::accumulate(lambda.begin(), lambda.end(), 0); }

    std::string describe() const {
        std::string s = "(n=" + std::to_string(n) + ", zeta=" + std::to_string(zeta) +
                        ", gamma=" + std::to_string(gamma) + ", lambda=[";
        for (size_t i = 0; i < lambda.size(); ++i)
            s += (i ? "," : "") + std::to_string(lambda[i]);
        return s + "])";
    }

    bool operator==(const Weights&) const = default;
};

}  // namespace nullcorr
