// Batch driver for the pipeline: mesh generation, stiffness assembly,
// coarsening, convergence certificates, PCG solves, and the eps x h sweep.
// Exit codes: 0 success, 1 invalid certificate, 2 usage/validation error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "amg/coarse_space.hpp"
#include "amg/coarsen.hpp"
#include "amg/mesh.hpp"
#include "amg/mmatrix.hpp"
#include "amg/twolevel.hpp"

namespace {

struct MeshOptions {
    int n = 8;
    double eps = 1.0;
    std::vector<double> interface;  // x0,y0,x1,y1 (empty = no jump region)
    bool perturb = false;
    std::uint64_t seed = 0x5EEDu;
    double amplitude = 0.25;
};

amg::Rect parse_interface(const std::vector<double>& v) {
    if (v.empty()) return {};
    if (v.size() != 4)
        throw CLI::ValidationError("--interface", "expected x0,y0,x1,y1");
    return {v[0], v[1], v[2], v[3]};
}

void add_mesh_options(CLI::App* cmd, MeshOptions& m) {
    cmd->add_option("--n", m.n, "cells per side")->check(CLI::Range(2, 4096));
    cmd->add_option("--eps", m.eps, "coefficient inside the interface region")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--interface", m.interface, "jump region x0,y0,x1,y1")
        ->delimiter(',')
        ->expected(0, 4);
    cmd->add_flag("--perturb", m.perturb, "jitter interior vertices");
    cmd->add_option("--seed", m.seed, "perturbation seed");
    cmd->add_option("--amplitude", m.amplitude, "perturbation amplitude (times h)");
}

amg::TriMesh make_mesh(const MeshOptions& m) {
    return amg::generate_structured_mesh(m.n, parse_interface(m.interface), m.eps,
                                         m.perturb, m.seed, m.amplitude);
}

amg::SparseMatrix assemble(const amg::TriMesh& mesh, bool dirichlet) {
    auto [A, weights] = amg::assemble_stiffness(mesh);
    if (!dirichlet) return A;
    return amg::apply_dirichlet(A, amg::boundary_vertices(mesh)).A;
}

struct SolverOptions {
    double theta = 0.25;
    std::string scheme = "standard";
    std::string smoother = "sym_gauss_seidel";
    double omega = 2.0 / 3.0;
    double tol = 1e-8;
    int maxit = 500;
};

void add_solver_options(CLI::App* cmd, SolverOptions& s) {
    cmd->add_option("--theta", s.theta, "strength threshold")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--scheme", s.scheme, "interpolation scheme")
        ->check(CLI::IsMember({"direct", "standard"}));
    cmd->add_option("--smoother", s.smoother, "smoother kind")
        ->check(CLI::IsMember({"jacobi", "gauss_seidel", "sym_gauss_seidel"}));
    cmd->add_option("--omega", s.omega, "jacobi damping");
    cmd->add_option("--tol", s.tol, "PCG relative residual tolerance");
    cmd->add_option("--maxit", s.maxit, "PCG iteration cap");
}

amg::CertifyConfig to_config(const SolverOptions& s, bool neumann) {
    amg::CertifyConfig cfg;
    cfg.theta = s.theta;
    cfg.scheme = amg::scheme_from_name(s.scheme);
    cfg.smoother = {amg::smoother_from_name(s.smoother), s.omega};
    cfg.neumann = neumann;
    return cfg;
}

int run_sweep(const std::vector<double>& eps_list, const std::vector<int>& n_list,
              const SolverOptions& sol, const std::vector<double>& interface,
              bool dirichlet, const std::string& out_path) {
    std::vector<std::string> rows;
    bool all_valid = true;
    for (double eps : eps_list) {
        for (int n : n_list) {
            MeshOptions m;
            m.n = n;
            m.eps = eps;
            m.interface = interface;
            const amg::TriMesh mesh = make_mesh(m);
            const amg::SparseMatrix A = assemble(mesh, dirichlet);
            const amg::Pipeline pipe = amg::build_pipeline(A, to_config(sol, !dirichlet));
            const amg::ConvergenceCertificate cert = amg::certify(pipe);
            all_valid = all_valid && cert.valid;

            std::vector<double> b(A.n_rows, 1.0);
            const amg::PcgResult pcg_res = amg::pcg(
                A, b,
                [&](const std::vector<double>& r) {
                    return amg::two_level_apply_symmetrized(pipe.B, r);
                },
                sol.tol, sol.maxit, pipe.B.kernel);

            amg::SweepRow row;
            row.eps = eps;
            row.h = 1.0 / n;
            row.theta = sol.theta;
            row.cert = cert;
            row.iters = pcg_res.iterations;
            rows.push_back(amg::sweep_csv_row(row));
        }
    }
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw std::runtime_error("cannot open " + out_path + " for writing");
        out = &file;
    }
    *out << amg::sweep_csv_header() << "\n";
    for (const std::string& r : rows) *out << r << "\n";
    return all_valid ? 0 : 1;
}

std::vector<double> read_vector(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<double> v;
    double x;
    while (in >> x) v.push_back(x);
    if (static_cast<int>(v.size()) != n)
        throw std::runtime_error(path + ": expected " + std::to_string(n) + " values");
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-level AMG pipeline driver"};
    app.require_subcommand(1);

    MeshOptions mesh_opts;
    SolverOptions solver_opts;
    std::string out_path, matrix_path, mesh_path, rhs_path, config_path;
    std::string splitting_path, subdomains_path, precond = "twolevel";
    bool dirichlet = false;
    std::vector<double> sweep_eps{1.0, 1e-2, 1e-4, 1e-8};
    std::vector<int> sweep_n{8, 16, 32};
    int workers = 1;

    CLI::App* cmd_mesh = app.add_subcommand("mesh", "generate a structured mesh");
    add_mesh_options(cmd_mesh, mesh_opts);
    cmd_mesh->add_option("--out", out_path, "mesh JSON path")->required();

    CLI::App* cmd_assemble = app.add_subcommand("assemble", "P1 stiffness matrix");
    cmd_assemble->add_option("--mesh", mesh_path, "mesh JSON path")->required();
    cmd_assemble->add_flag("--dirichlet", dirichlet, "eliminate boundary vertices");
    cmd_assemble->add_option("--out", out_path, "Matrix Market path")->required();

    CLI::App* cmd_coarsen = app.add_subcommand("coarsen", "strength + MIS splitting");
    cmd_coarsen->add_option("--matrix", matrix_path, "Matrix Market path")->required();
    add_solver_options(cmd_coarsen, solver_opts);
    cmd_coarsen->add_option("--splitting", splitting_path, "splitting JSON output");
    cmd_coarsen->add_option("--subdomains", subdomains_path, "subdomain JSON output");

    CLI::App* cmd_certify = app.add_subcommand("certify", "convergence certificate");
    add_mesh_options(cmd_certify, mesh_opts);
    add_solver_options(cmd_certify, solver_opts);
    cmd_certify->add_option("--config", config_path, "config JSON (overrides flags)");
    cmd_certify->add_flag("--dirichlet", dirichlet, "eliminate boundary vertices");
    cmd_certify->add_option("--out", out_path, "certificate JSON path");

    CLI::App* cmd_solve = app.add_subcommand("solve", "PCG with the chosen preconditioner");
    cmd_solve->add_option("--matrix", matrix_path, "Matrix Market path")->required();
    cmd_solve->add_option("--rhs", rhs_path, "right-hand side (whitespace-separated)");
    bool neumann_solve = false;
    cmd_solve->add_flag("--neumann", neumann_solve, "treat the matrix as singular Neumann");
    add_solver_options(cmd_solve, solver_opts);
    cmd_solve->add_option("--precond", precond, "preconditioner")
        ->check(CLI::IsMember({"twolevel", "additive", "none"}));

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "eps x h certificate sweep");
    cmd_sweep->add_option("--eps", sweep_eps, "eps values")->delimiter(',');
    cmd_sweep->add_option("--n", sweep_n, "cells per side values")->delimiter(',');
    cmd_sweep->add_option("--interface", mesh_opts.interface, "jump region x0,y0,x1,y1")
        ->delimiter(',');
    cmd_sweep->add_flag("--dirichlet", dirichlet, "eliminate boundary vertices");
    add_solver_options(cmd_sweep, solver_opts);
    cmd_sweep->add_option("--workers", workers, "parallel sweep cells");
    cmd_sweep->add_option("--out", out_path, "CSV output (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (cmd_mesh->parsed()) {
            amg::write_mesh_json(make_mesh(mesh_opts), out_path);
        } else if (cmd_assemble->parsed()) {
            const amg::TriMesh mesh = amg::read_mesh_json(mesh_path);
            amg::write_matrix_market(assemble(mesh, dirichlet), out_path);
        } else if (cmd_coarsen->parsed()) {
            const amg::SparseMatrix A = amg::read_matrix_market(matrix_path);
            const amg::MMatrixVerdict verdict = amg::is_m_matrix(A);
            const amg::SparseMatrix AM = verdict.ok ? A : amg::build_a_plus(A);
            auto [S, A_S] = amg::build_strength(AM, solver_opts.theta);
            const amg::CfSplitting split = amg::mis_coarsen(S);
            const amg::Scheme scheme = amg::scheme_from_name(solver_opts.scheme);
            const amg::SubdomainSet subs = amg::build_subdomains(split, S, scheme);
            if (!splitting_path.empty())
                amg::write_splitting_json(split, solver_opts.theta, scheme, splitting_path);
            if (!subdomains_path.empty()) amg::write_subdomains_json(subs, subdomains_path);
            std::cout << "n=" << split.n << " coarse=" << split.J()
                      << " C_o=" << subs.c_o << "\n";
        } else if (cmd_certify->parsed()) {
            amg::SparseMatrix A;
            amg::CertifyConfig cfg;
            std::string descriptor;
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                if (!in) throw std::runtime_error("cannot open " + config_path);
                nlohmann::json j;
                in >> j;
                MeshOptions m;
                const auto& jm = j.at("mesh");
                m.n = jm.at("n").get<int>();
                m.eps = jm.value("eps", 1.0);
                m.interface = jm.value("interface", std::vector<double>{});
                m.perturb = jm.value("perturb", false);
                m.seed = jm.value("seed", std::uint64_t{0x5EEDu});
                dirichlet = j.value("dirichlet", false);
                SolverOptions s;
                s.theta = j.value("theta", 0.25);
                s.scheme = j.value("scheme", std::string("standard"));
                s.smoother = j.value("smoother", std::string("sym_gauss_seidel"));
                s.omega = j.value("omega", 2.0 / 3.0);
                A = assemble(make_mesh(m), dirichlet);
                cfg = to_config(s, !dirichlet);
                descriptor = "mesh n=" + std::to_string(m.n) +
                             " eps=" + std::to_string(m.eps);
            } else {
                A = assemble(make_mesh(mesh_opts), dirichlet);
                cfg = to_config(solver_opts, !dirichlet);
                descriptor = "mesh n=" + std::to_string(mesh_opts.n) +
                             " eps=" + std::to_string(mesh_opts.eps);
            }
            const amg::Pipeline pipe = amg::build_pipeline(A, cfg);
            const amg::ConvergenceCertificate cert = amg::certify(pipe);
            if (!out_path.empty()) amg::write_certificate_json(cert, pipe, out_path, descriptor);
            for (const amg::ClauseResult& c : cert.clauses)
                std::cout << c.name << ": " << (c.pass ? "pass" : "FAIL") << " (lhs="
                          << c.lhs << ", rhs=" << c.rhs << ")\n";
            std::cout << "normE2=" << cert.normE2 << " valid="
                      << (cert.valid ? "yes" : "no") << "\n";
            if (!cert.valid) return 1;
        } else if (cmd_solve->parsed()) {
            const amg::SparseMatrix A = amg::read_matrix_market(matrix_path);
            const amg::Pipeline pipe =
                amg::build_pipeline(A, to_config(solver_opts, neumann_solve));
            std::vector<double> b = rhs_path.empty()
                                        ? std::vector<double>(A.n_rows, 1.0)
                                        : read_vector(rhs_path, A.n_rows);
            amg::Preconditioner M;
            if (precond == "twolevel")
                M = [&](const std::vector<double>& r) {
                    return amg::two_level_apply_symmetrized(pipe.B, r);
                };
            else if (precond == "additive") {
                auto Bhat = std::make_shared<amg::AdditivePreconditioner>(
                    amg::build_additive(pipe.B, pipe.A_S, pipe.subdomains));
                M = [&pipe, Bhat](const std::vector<double>& r) {
                    return amg::additive_apply(*Bhat, r);
                };
            } else
                M = [](const std::vector<double>& r) { return r; };
            const amg::PcgResult res =
                amg::pcg(A, b, M, solver_opts.tol, solver_opts.maxit, pipe.B.kernel);
            std::cout << "iterations=" << res.iterations
                      << " converged=" << (res.converged ? "yes" : "no")
                      << " relres=" << (res.residual_history.empty()
                                            ? 0.0
                                            : res.residual_history.back())
                      << "\n";
            if (!res.converged) return 1;
        } else if (cmd_sweep->parsed()) {
            (void)workers;  // cells are cheap enough single-threaded; flag reserved
            return run_sweep(sweep_eps, sweep_n, solver_opts, mesh_opts.interface,
                             dirichlet, out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
