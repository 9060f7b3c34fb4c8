#include "ssl/info_nce.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "kernels/kernels.hpp"

namespace trajalign::ssl {

namespace {

double checked_norm(const double* v, int dim) {
    const double n = std::sqrt(kernels::vdot(dim, v, v));
    require(n > 0.0, "ZeroVector", "cosine similarity undefined for the zero vector");
    return n;
}

// d sim(u,v)/du = v/(|u||v|) - sim * u/|u|^2
void add_cosine_grad_u(const double* u, const double* v, int dim, double norm_u,
                       double norm_v, double sim, double coeff, double* du) {
    const double a = coeff / (norm_u * norm_v);
    const double b = -coeff * sim / (norm_u * norm_u);
    for (int i = 0; i < dim; ++i) du[i] += a * v[i] + b * u[i];
}

}  // namespace

double cosine_similarity(const double* a, const double* b, int dim) {
    return kernels::vdot(dim, a, b) / (checked_norm(a, dim) * checked_norm(b, dim));
}

double info_nce(const double* u, const double* v_plus, const NegativeSet& negatives,
                int dim, double tau) {
    return info_nce_with_grad(u, v_plus, negatives, dim, tau, 0.0, nullptr, nullptr);
}

double info_nce_with_grad(const double* u, const double* v_plus,
                          const NegativeSet& negatives, int dim, double tau,
                          double upstream, double* du, double* dv_plus) {
    require(tau > 0.0, "NonPositiveTemperature", "tau must be > 0");
    const int n = static_cast<int>(negatives.size());
    const bool want_grad = upstream != 0.0;

    const double norm_u = checked_norm(u, dim);
    const double norm_vp = checked_norm(v_plus, dim);
    const double sim_pos = kernels::vdot(dim, u, v_plus) / (norm_u * norm_vp);

    std::vector<double> sims(n), norms(n);
    double mx = sim_pos / tau;
    for (int j = 0; j < n; ++j) {
        norms[j] = checked_norm(negatives.vecs[j], dim);
        sims[j] = kernels::vdot(dim, u, negatives.vecs[j]) / (norm_u * norms[j]);
        mx = std::max(mx, sims[j] / tau);
    }

    const double e_pos = std::exp(sim_pos / tau - mx);
    double sum = e_pos;
    std::vector<double> e_neg(n);
    for (int j = 0; j < n; ++j) {
        e_neg[j] = std::exp(sims[j] / tau - mx);
        sum += e_neg[j];
    }
    const double loss = std::log(sum) + mx - sim_pos / tau;

    if (want_grad) {
        const double p_pos = e_pos / sum;
        // dL/dsim_pos = (p_pos - 1)/tau; dL/dsim_j = p_j/tau.
        if (du != nullptr)
            add_cosine_grad_u(u, v_plus, dim, norm_u, norm_vp, sim_pos,
                              upstream * (p_pos - 1.0) / tau, du);
        if (dv_plus != nullptr)
            add_cosine_grad_u(v_plus, u, dim, norm_vp, norm_u, sim_pos,
                              upstream * (p_pos - 1.0) / tau, dv_plus);
        for (int j = 0; j < n; ++j) {
            const double coeff = upstream * (e_neg[j] / sum) / tau;
            if (du != nullptr)
                add_cosine_grad_u(u, negatives.vecs[j], dim, norm_u, norms[j], sims[j],
                                  coeff, du);
            if (!negatives.grads.empty() && negatives.grads[j] != nullptr)
                add_cosine_grad_u(negatives.vecs[j], u, dim, norms[j], norm_u, sims[j],
                                  coeff, negatives.grads[j]);
        }
    }
    return loss;
}

}  // namespace trajalign::ssl
