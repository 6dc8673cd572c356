#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ineqreg/diagnostics.hpp"
#include "ineqreg/experiments.hpp"
#include "ineqreg/version.hpp"

namespace py = pybind11;
using namespace ineqreg;

namespace {

RestrictionSystem make_system(const Matrix& H, const Matrix& K, const Matrix& G) {
    RestrictionSystem sys{H, K, G};
    validate(sys);
    return sys;
}

std::optional<std::vector<Index>> to_preferred(const std::optional<std::vector<Index>>& s) {
    return s;
}

py::dict summary_to_dict(const Summary& s) {
    py::dict out;
    out["names"] = s.names;
    out["mean"] = s.mean;
    out["sd"] = s.sd;
    out["ess"] = s.ess;
    out["acf1"] = s.acf1;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bayesian linear regression under linear inequality restrictions";
    m.attr("__version__") = kVersion;

    py::class_<RngStream>(m, "RngStream")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream") = 0)
        .def("uniform", &RngStream::uniform)
        .def("normal", &RngStream::normal)
        .def("gamma", &RngStream::gamma, py::arg("shape"));

    m.def("sample_inverse_gamma", &sample_inverse_gamma, py::arg("shape"), py::arg("rate"),
          py::arg("rng"));
    m.def("sample_truncnorm", &sample_truncnorm, py::arg("mu"), py::arg("sigma"), py::arg("lo"),
          py::arg("hi"), py::arg("rng"));
    m.def(
        "sample_tmvn_box",
        [](const Vector& mean, const Matrix& cov, const Vector& lower, const Vector& upper,
           const Vector& init, int sweeps, RngStream& rng) {
            return sample_tmvn_box(mean, cov, BoxBounds(lower, upper), init, sweeps, rng);
        },
        py::arg("mean"), py::arg("cov"), py::arg("lower"), py::arg("upper"), py::arg("init"),
        py::arg("sweeps"), py::arg("rng"));
    m.def("sample_inverse_wishart", &sample_inverse_wishart, py::arg("df"), py::arg("scale"),
          py::arg("rng"));
    m.def("sample_matrix_normal", &sample_matrix_normal, py::arg("M"), py::arg("Sigma"),
          py::arg("D"), py::arg("rng"));

    m.def(
        "select_partition",
        [](const Matrix& H, const Matrix& K, const Matrix& G,
           const std::optional<std::vector<Index>>& preferred) {
            Partition p = select_partition(make_system(H, K, G), to_preferred(preferred));
            return py::make_tuple(p.S, p.Sprime);
        },
        py::arg("H"), py::arg("K"), py::arg("G"), py::arg("preferred") = py::none());
    m.def(
        "check_feasible",
        [](const Matrix& beta, const Matrix& H, const Matrix& K, const Matrix& G, double slack) {
            RestrictionSystem sys{H, K, G};
            if (beta.cols() == 1 && G.cols() == 1)
                return check_feasible(Vector(beta.col(0)), sys, slack);
            return check_feasible(beta, sys, slack);
        },
        py::arg("beta"), py::arg("H"), py::arg("K"), py::arg("G"), py::arg("slack") = 1e-12);
    m.def(
        "feasible_point",
        [](const Matrix& H, const Matrix& K, const Matrix& G) {
            RestrictionSystem sys = make_system(H, K, G);
            Partition p = select_partition(sys);
            if (sys.k() == 1) return Matrix(feasible_point(sys, p));
            return feasible_point_mv(sys, p);
        },
        py::arg("H"), py::arg("K"), py::arg("G"));

    m.def(
        "fit_univariate",
        [](const Matrix& X, const Vector& y, const Matrix& H, const Matrix& K, const Matrix& G,
           double a, double b, const std::optional<Vector>& mu, std::size_t iters,
           std::optional<std::size_t> burn_in, std::uint64_t seed, int inner_sweeps,
           const std::optional<std::vector<Index>>& preferred_S) {
            RestrictionSystem sys = make_system(H, K, G);
            Partition partition = select_partition(sys, to_preferred(preferred_S));
            PriorSpec prior = prior_from_ols(X, y, partition, a, b);
            if (mu) {
                if (mu->size() != partition.p())
                    throw ShapeMismatch("fit_univariate: mu must have p entries");
                for (Index i = 0; i < partition.q(); ++i)
                    prior.mu_S[i] = (*mu)[partition.S[size_t(i)]];
                for (Index i = 0; i < partition.p() - partition.q(); ++i)
                    prior.mu_Sprime[i] = (*mu)[partition.Sprime[size_t(i)]];
            }
            ChainOptions opt;
            opt.iters = iters;
            if (burn_in) opt.burn_in = *burn_in;
            opt.seed = seed;
            opt.inner_sweeps = inner_sweeps;
            Chain chain = run_chain(X, y, sys, partition, prior, opt);
            py::dict out;
            out["beta"] = chain.beta;
            out["sigma2"] = chain.sigma2;
            out["burn_in"] = chain.burn_in;
            out["sampling_seconds"] = chain.sampling_seconds;
            out["summary"] = summary_to_dict(summarize(chain));
            return out;
        },
        py::arg("X"), py::arg("y"), py::arg("H"), py::arg("K"), py::arg("G"), py::arg("a") = 1.0,
        py::arg("b") = 1.0, py::arg("mu") = py::none(), py::arg("iters") = 10000,
        py::arg("burn_in") = py::none(), py::arg("seed") = 0, py::arg("inner_sweeps") = 5,
        py::arg("preferred_S") = py::none());

    m.def(
        "fit_multivariate",
        [](const Matrix& X, const Matrix& Y, const Matrix& R, const Matrix& K, const Matrix& G,
           double r, std::size_t iters, std::optional<std::size_t> burn_in, std::uint64_t seed,
           int inner_sweeps, const std::optional<std::vector<Index>>& preferred_S) {
            RestrictionSystem sys = make_system(R, K, G);
            Partition partition = select_partition(sys, to_preferred(preferred_S));
            PriorSpecMV prior = prior_from_ols_mv(X, Y, partition, r);
            ChainOptionsMV opt;
            opt.iters = iters;
            if (burn_in) opt.burn_in = *burn_in;
            opt.seed = seed;
            opt.inner_sweeps = inner_sweeps;
            ChainMV chain = run_chain_mv(X, Y, sys, partition, prior, opt);
            py::dict out;
            out["sigma"] = chain.sigma;
            out["beta"] = chain.beta;
            out["p"] = chain.p;
            out["k"] = chain.k;
            out["burn_in"] = chain.burn_in;
            out["sampling_seconds"] = chain.sampling_seconds;
            out["summary"] = summary_to_dict(summarize(chain));
            return out;
        },
        py::arg("X"), py::arg("Y"), py::arg("R"), py::arg("K"), py::arg("G"), py::arg("r") = 2.0,
        py::arg("iters") = 10000, py::arg("burn_in") = py::none(), py::arg("seed") = 0,
        py::arg("inner_sweeps") = 5, py::arg("preferred_S") = py::none());

    m.def(
        "acf", [](const Vector& series, Index max_lag) { return acf(series, max_lag); },
        py::arg("series"), py::arg("max_lag"));
    m.def("ess", &ess, py::arg("series"));
    m.def(
        "summarize",
        [](const Matrix& draws, const std::vector<std::string>& names) {
            return summary_to_dict(summarize(draws, names));
        },
        py::arg("draws"), py::arg("names"));
    m.def("mse", &mse, py::arg("estimates"), py::arg("truth"));
    m.def("relative_efficiency", &relative_efficiency, py::arg("mse_unrestricted"),
          py::arg("mse_restricted"));

    py::register_exception<Error>(m, "IneqregError");
}
