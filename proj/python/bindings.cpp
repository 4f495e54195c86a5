// Copyright 2026 The gpbec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "gpbec/bogoliubov.hpp"
#include "gpbec/commands.hpp"
#include "gpbec/config.hpp"
#include "gpbec/errors.hpp"
#include "gpbec/fock_basis.hpp"
#include "gpbec/operators.hpp"
#include "gpbec/scattering.hpp"
#include "gpbec/spectra.hpp"

namespace py = pybind11;
using namespace gpbec;

namespace {

LatticeVector to_lattice(const std::array<int, 3>& a) { return {a[0], a[1], a[2]}; }

py::array_t<int> points_array(const MomentumSet& set) {
  py::array_t<int> out({py::ssize_t(set.size()), py::ssize_t(3)});
  auto m = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < set.size(); ++i) {
    m(py::ssize_t(i), 0) = set[i].x;
    m(py::ssize_t(i), 1) = set[i].y;
    m(py::ssize_t(i), 2) = set[i].z;
  }
  return out;
}

std::shared_ptr<const MomentumSet> make_set(double cutoff) {
  std::vector<std::string> warnings;
  auto set = std::make_shared<const MomentumSet>(build_momentum_set(cutoff, &warnings));
  for (const auto& w : warnings) PyErr_WarnEx(PyExc_RuntimeWarning, w.c_str(), 1);
  return set;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lattice scattering, truncated Fock spaces and Bogoliubov checks for the Gross-Pitaevskii Bose gas";
  m.attr("__version__") = GPBEC_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<NonConvergence>(m, "NonConvergence", numerical.ptr());
  py::register_exception<NoConvergence>(m, "NoConvergence", numerical.ptr());
  py::register_exception<BornDivergence>(m, "BornDivergence", numerical.ptr());
  py::register_exception<DimensionOverflow>(m, "DimensionOverflow", PyExc_RuntimeError);
  py::register_exception<MissingPhi>(m, "MissingPhi", PyExc_ValueError);

  py::enum_<Profile>(m, "Profile")
      .value("uniform_ball", Profile::uniform_ball)
      .value("soft_radial", Profile::soft_radial);

  py::class_<PotentialSpec>(m, "PotentialSpec")
      .def(py::init([](Profile profile, double radius, double height, double kappa) {
             PotentialSpec v{profile, radius, height, kappa};
             v.validate();
             return v;
           }),
           py::arg("profile") = Profile::uniform_ball, py::arg("radius") = 1.0, py::arg("height") = 1.0,
           py::arg("kappa") = 0.0)
      .def_readwrite("profile", &PotentialSpec::profile)
      .def_readwrite("radius", &PotentialSpec::radius)
      .def_readwrite("height", &PotentialSpec::height)
      .def_readwrite("kappa", &PotentialSpec::kappa)
      .def("with_kappa", &PotentialSpec::with_kappa)
      .def("__repr__", [](const PotentialSpec& v) {
        return "PotentialSpec(" + to_string(v.profile) + ", radius=" + format_double(v.radius) +
               ", height=" + format_double(v.height) + ", kappa=" + format_double(v.kappa) + ")";
      });

  m.def("fourier_coefficient", py::overload_cast<const PotentialSpec&, double>(&fourier_coefficient), py::arg("v"),
        py::arg("k"));
  m.def("fourier_coefficient_vec", py::overload_cast<const PotentialSpec&, const Vec3&>(&fourier_coefficient),
        py::arg("v"), py::arg("k"));
  m.def(
      "scaled_fourier_coefficient",
      [](const PotentialSpec& v, const std::array<int, 3>& r, int N) {
        return scaled_fourier_coefficient(v, to_lattice(r).momentum(), N);
      },
      py::arg("v"), py::arg("r"), py::arg("N"));

  py::class_<MomentumSet, std::shared_ptr<MomentumSet>>(m, "MomentumSet")
      .def_property_readonly("cutoff", &MomentumSet::cutoff)
      .def_property_readonly("extent", &MomentumSet::extent)
      .def("__len__", &MomentumSet::size)
      .def_property_readonly("points", &points_array, "integer coordinates, momenta are 2 pi times these")
      .def("index_of", [](const MomentumSet& s, const std::array<int, 3>& p) { return s.index_of(to_lattice(p)); });

  m.def("build_momentum_set",
        [](double cutoff) { return std::const_pointer_cast<MomentumSet>(make_set(cutoff)); }, py::arg("cutoff"));
  m.def(
      "momentum_set_from_points",
      [](const std::vector<std::array<int, 3>>& pts) {
        std::vector<LatticeVector> v;
        for (const auto& p : pts) v.push_back(to_lattice(p));
        return std::make_shared<MomentumSet>(momentum_set_from_points(std::move(v)));
      },
      py::arg("points"));

  py::enum_<ScatteringBackend>(m, "ScatteringBackend")
      .value("automatic", ScatteringBackend::automatic)
      .value("dense", ScatteringBackend::dense)
      .value("fft_cg", ScatteringBackend::fft_cg)
      .value("position_grid", ScatteringBackend::position_grid);

  py::class_<ScatteringSolution>(m, "ScatteringSolution")
      .def_property_readonly("momenta", [](const ScatteringSolution& s) { return std::const_pointer_cast<MomentumSet>(s.momenta); })
      .def_property_readonly("phi", [](const ScatteringSolution& s) { return py::array_t<double>(py::ssize_t(s.phi.size()), s.phi.data()); })
      .def_readonly("N", &ScatteringSolution::N)
      .def_readonly("kappa", &ScatteringSolution::kappa)
      .def_readonly("residual_norm", &ScatteringSolution::residual_norm)
      .def_readonly("iterations", &ScatteringSolution::iterations)
      .def_readonly("backend", &ScatteringSolution::backend)
      .def_readonly("sign_violations", &ScatteringSolution::sign_violations)
      .def_readonly("evenness_error", &ScatteringSolution::evenness_error)
      .def("at", [](const ScatteringSolution& s, const std::array<int, 3>& p) { return s.at(to_lattice(p)); });

  m.def(
      "solve_lattice_scattering",
      [](const PotentialSpec& v, int N, std::shared_ptr<MomentumSet> momenta, double tol, ScatteringBackend backend) {
        LinearSolveOptions o;
        o.tol = tol;
        o.backend = backend;
        py::gil_scoped_release release;
        return solve_lattice_scattering(v, N, momenta, o);
      },
      py::arg("v"), py::arg("N"), py::arg("momenta"), py::arg("tol") = 1e-10,
      py::arg("backend") = ScatteringBackend::automatic);
  m.def("solve_position_space", &solve_position_space, py::arg("v"), py::arg("N"), py::arg("momenta"),
        py::arg("grid"), py::arg("tol") = 1e-12);
  m.def("lattice_scattering_length", &lattice_scattering_length, py::arg("solution"), py::arg("v"));
  m.def("first_born_scattering_length", &first_born_scattering_length, py::arg("v"));
  m.def(
      "born_resolvent_scattering_length",
      [](const PotentialSpec& v, int collocation_nodes, int nystrom_nodes) {
        return born_resolvent_scattering_length(v, RadialGrid{collocation_nodes, nystrom_nodes});
      },
      py::arg("v"), py::arg("collocation_nodes") = 48, py::arg("nystrom_nodes") = 96);
  m.def("born_spectral_radius", [](const PotentialSpec& v) { return born_spectral_radius(v); }, py::arg("v"));
  m.def("radial_ode_scattering_length", &radial_ode_scattering_length, py::arg("v"), py::arg("steps") = 20000);
  m.def(
      "convergence_study",
      [](const PotentialSpec& v, const std::vector<int>& N_list, double cutoff_factor) {
        ConvergenceStudy st;
        {
          py::gil_scoped_release release;
          st = convergence_study(v, N_list, proportional_cutoff(cutoff_factor));
        }
        py::list rows;
        for (const auto& r : st.rows) {
          py::dict d;
          d["N"] = r.N;
          d["cutoff"] = r.cutoff;
          d["a_lattice"] = r.a_lattice;
          d["a_ode"] = r.a_ode;
          d["abs_err"] = r.abs_err;
          d["ok"] = r.ok;
          rows.append(d);
        }
        py::dict out;
        out["rows"] = rows;
        out["slope"] = st.slope ? py::object(py::float_(*st.slope)) : py::object(py::none());
        return out;
      },
      py::arg("v"), py::arg("N_list"), py::arg("cutoff_factor") = 4.0);
  m.def(
      "phi_norm_report",
      [](const ScatteringSolution& s) {
        const auto r = phi_norm_report(s);
        return py::dict(py::arg("sup_abs") = r.sup_abs, py::arg("l2") = r.l2, py::arg("weighted_l1") = r.weighted_l1,
                        py::arg("sup_p2") = r.sup_p2);
      },
      py::arg("solution"));

  py::class_<FockBasis, std::shared_ptr<FockBasis>>(m, "FockBasis")
      .def_property_readonly("dim", &FockBasis::dim)
      .def_property_readonly("num_modes", &FockBasis::num_modes)
      .def_property_readonly("states",
                             [](const FockBasis& b) {
                               py::array_t<std::uint8_t> out({py::ssize_t(b.dim()), py::ssize_t(b.num_modes())});
                               auto a = out.mutable_unchecked<2>();
                               for (std::size_t i = 0; i < b.dim(); ++i)
                                 for (std::size_t j = 0; j < b.num_modes(); ++j)
                                   a(py::ssize_t(i), py::ssize_t(j)) = std::uint8_t(b.occupation(i, j));
                               return out;
                             })
      .def("index_of", [](const FockBasis& b, const std::vector<std::uint8_t>& occ) { return b.index_of(occ); });

  m.def(
      "enumerate_basis",
      [](std::shared_ptr<MomentumSet> momenta, int n, std::optional<std::array<int, 3>> total_momentum,
         std::optional<int> n_max, std::size_t dim_cap) {
        std::optional<LatticeVector> P;
        if (total_momentum) P = to_lattice(*total_momentum);
        return std::make_shared<FockBasis>(enumerate_basis_range(momenta, n, n_max.value_or(n), P, dim_cap));
      },
      py::arg("momenta"), py::arg("n"), py::arg("total_momentum") = std::array<int, 3>{0, 0, 0},
      py::arg("n_max") = py::none(), py::arg("dim_cap") = kDefaultDimCap);

  py::enum_<OperatorTag>(m, "OperatorTag")
      .value("H0", OperatorTag::H0)
      .value("H1", OperatorTag::H1)
      .value("H2", OperatorTag::H2)
      .value("Q2", OperatorTag::Q2)
      .value("Q3", OperatorTag::Q3)
      .value("Q4", OperatorTag::Q4)
      .value("Hmu", OperatorTag::Hmu)
      .value("Nplus", OperatorTag::Nplus)
      .value("Nzero", OperatorTag::Nzero)
      .value("Ntotal", OperatorTag::Ntotal)
      .value("Bgen", OperatorTag::Bgen)
      .value("Gamma1", OperatorTag::Gamma1)
      .value("Gamma2", OperatorTag::Gamma2);

  py::class_<SparseHermitianOperator>(m, "SparseOperator")
      .def_readonly("name", &SparseHermitianOperator::name)
      .def_property_readonly("dim", &SparseHermitianOperator::dim)
      .def_property_readonly("hermitian", &SparseHermitianOperator::hermitian)
      .def_property_readonly("nnz", [](const SparseHermitianOperator& op) { return op.matrix.nonZeros(); })
      .def("to_dense", [](const SparseHermitianOperator& op) { return Eigen::MatrixXd(op.matrix); })
      .def("apply", [](const SparseHermitianOperator& op, const Eigen::VectorXd& x) { return op.apply(x); })
      .def("coo", [](const SparseHermitianOperator& op) {
        std::vector<long> rows, cols;
        std::vector<double> vals;
        for (Eigen::Index r = 0; r < op.matrix.outerSize(); ++r)
          for (SparseMatrix::InnerIterator it(op.matrix, r); it; ++it) {
            rows.push_back(long(it.row()));
            cols.push_back(long(it.col()));
            vals.push_back(it.value());
          }
        return py::make_tuple(py::array(py::cast(rows)), py::array(py::cast(cols)), py::array(py::cast(vals)));
      })
      .def("write_coo", [](const SparseHermitianOperator& op, const std::filesystem::path& p) { write_coo(op, p); });

  m.def(
      "assemble",
      [](OperatorTag tag, const FockBasis& basis, const PotentialSpec& v, int N, double mu,
         const ScatteringSolution* phi) { return assemble(tag, basis, AssemblyParams{v, N, mu, phi}); },
      py::arg("tag"), py::arg("basis"), py::arg("v"), py::arg("N"), py::arg("mu") = 0.0, py::arg("phi") = nullptr);
  m.def(
      "one_particle_density_matrix",
      [](const Eigen::VectorXd& state, const FockBasis& basis) {
        return one_particle_density_matrix(std::span<const double>(state.data(), std::size_t(state.size())), basis);
      },
      py::arg("state"), py::arg("basis"));

  m.def(
      "ground_state",
      [](const SparseHermitianOperator& op, double tol, std::size_t dense_limit, std::uint64_t seed) {
        EigenOptions o;
        o.tol = tol;
        o.dense_limit = dense_limit;
        o.seed = seed;
        const auto r = ground_state(op, o);
        return py::make_tuple(r.energy, r.vector, r.residual, r.iterations);
      },
      py::arg("op"), py::arg("tol") = 1e-10, py::arg("dense_limit") = 2000, py::arg("seed") = 20240917);

  m.def(
      "grand_canonical_scan",
      [](const PotentialSpec& v, int N, std::shared_ptr<MomentumSet> momenta, int n_min, int n_max,
         std::optional<double> mu) {
        ScanOptions o;
        if (mu) {
          o.mu_mode = MuMode::explicit_value;
          o.mu = *mu;
        }
        const auto scan = grand_canonical_scan(v, N, momenta, n_min, n_max, o);
        py::list rows;
        for (const auto& r : scan.rows) {
          py::dict d;
          d["n"] = r.n;
          d["dim"] = r.dim;
          d["energy"] = r.energy;
          d["depletion"] = r.depletion;
          d["condensate_occupation"] = r.condensate_occupation;
          d["residual"] = r.residual;
          d["skipped"] = r.skipped;
          rows.append(d);
        }
        py::dict out;
        out["rows"] = rows;
        out["mu"] = scan.mu;
        out["a_lattice"] = scan.a_lattice;
        out["argmin_n"] = scan.argmin_n ? py::object(py::int_(*scan.argmin_n)) : py::object(py::none());
        out["vertex"] = scan.vertex ? py::object(py::float_(*scan.vertex)) : py::object(py::none());
        return out;
      },
      py::arg("v"), py::arg("N"), py::arg("momenta"), py::arg("n_min"), py::arg("n_max"), py::arg("mu") = py::none());

  m.def(
      "trial_energy",
      [](const PotentialSpec& v, int N, double mu, const ScatteringSolution& phi) {
        const auto r = trial_energy(v, N, mu, phi);
        return py::make_tuple(r.trial_energy, *r.exact_energy);
      },
      py::arg("v"), py::arg("N"), py::arg("mu"), py::arg("phi"));
  m.def(
      "apply_exp",
      [](const SparseHermitianOperator& generator, double t, const Eigen::VectorXd& x, double tol) {
        UnitaryApplication u{generator};
        u.tol = tol;
        const auto r = apply_exp(u, t, x);
        return py::make_tuple(r.y, r.norm_drift);
      },
      py::arg("generator"), py::arg("t"), py::arg("x"), py::arg("tol") = 1e-10);
  m.def(
      "commutator_identity_residual",
      [](const FockBasis& basis, const PotentialSpec& v, int N, const ScatteringSolution& phi) {
        const auto r = commutator_identity_residual(basis, v, N, phi);
        return py::dict(py::arg("full_norm") = r.full_norm, py::arg("restricted_norm") = r.restricted_norm,
                        py::arg("inner_dim") = r.inner_dim);
      },
      py::arg("basis"), py::arg("v"), py::arg("N"), py::arg("phi"));
  m.def(
      "nplus_growth_check",
      [](const FockBasis& basis, const ScatteringSolution& phi, int N, const std::vector<double>& t_grid, int trials,
         std::uint64_t seed) {
        const auto r = nplus_growth_check(basis, phi, N, t_grid, trials, seed);
        return py::make_tuple(r.max_ratio, r.max_norm_drift);
      },
      py::arg("basis"), py::arg("phi"), py::arg("N"), py::arg("t_grid"), py::arg("trials"), py::arg("seed"));

  m.def(
      "run_command",
      [](const std::string& command, const std::string& config_text, std::optional<std::string> out_dir,
         std::optional<std::uint64_t> seed) {
        auto cfg = parse_config(config_text);
        if (out_dir) cfg.output_dir = *out_dir;
        if (seed) cfg.rng_seed = *seed;
        const auto r = run_command(parse_command(command), cfg);
        std::vector<std::string> files;
        for (const auto& f : r.files) files.push_back(f.string());
        return py::make_tuple(files, r.numerical_failure, r.message);
      },
      py::arg("command"), py::arg("config_text"), py::arg("out_dir") = py::none(), py::arg("seed") = py::none());
}
