#include "egns/experiments.hpp"

#include <cstdio>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "egns/exact_solutions.hpp"

namespace egns {

namespace {

std::string nu_tag(double nu) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", nu);
    return buf;
}

}  // namespace

std::string taylor_green_csv_name(double nu, int m) {
    return "tg_nu" + nu_tag(nu) + "_m" + std::to_string(m) + ".csv";
}

std::string conservation_csv_name(double nu, int m) {
    return "conservation_nu" + nu_tag(nu) + "_m" + std::to_string(m) + ".csv";
}

RunConfig make_run_config(const ExperimentSpec& spec, ExperimentKind kind, int m, double nu) {
    RunConfig cfg;
    cfg.m = m;
    cfg.dt = spec.dt;
    cfg.T = spec.T;
    cfg.nu = nu;
    cfg.scheme = spec.scheme;
    cfg.picard_tol = spec.picard_tol;
    cfg.picard_max_iters = spec.picard_max_iters;
    cfg.checkpoint_stride = spec.checkpoint_stride;
    cfg.checkpoint_dir = spec.out_dir;

    if (kind == ExperimentKind::TaylorGreen) {
        const AnalyticSolution tg = taylor_green(nu);
        cfg.initial = [u = tg.u](const Vec3& x) { return u(x, 0.0); };
        cfg.forcing = manufactured_forcing(tg, nu);
        cfg.exact = as_exact(tg);
        cfg.diagnostics_csv = spec.out_dir + "/" + taylor_green_csv_name(nu, m);
    } else {
        cfg.initial = helical_initial_condition();
        const std::string stem = kind == ExperimentKind::Custom
                                     ? "custom_nu" + nu_tag(nu) + "_m" + std::to_string(m) + ".csv"
                                     : conservation_csv_name(nu, m);
        cfg.diagnostics_csv = spec.out_dir + "/" + stem;
    }
    return cfg;
}

namespace {

struct SweepJob {
    double nu;
    int m;
    RunConfig config;
    std::optional<TransientResult> result;
    std::exception_ptr error;
};

void run_jobs(std::vector<SweepJob>& jobs, int n_threads) {
    if (n_threads <= 1) {
        for (SweepJob& job : jobs) {
            try {
                job.result = run_transient(job.config);
            } catch (...) {
                job.error = std::current_exception();
            }
        }
        return;
    }
    std::vector<std::thread> workers;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < n_threads; ++t)
        workers.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= jobs.size()) return;
                try {
                    jobs[i].result = run_transient(jobs[i].config);
                } catch (...) {
                    jobs[i].error = std::current_exception();
                }
            }
        });
    for (std::thread& w : workers) w.join();
}

int run_sweep(const ExperimentSpec& spec, ExperimentKind kind) {
    std::filesystem::create_directories(spec.out_dir);
    std::vector<SweepJob> jobs;
    for (double nu : spec.nu)
        for (int m : spec.mesh_m) jobs.push_back({nu, m, make_run_config(spec, kind, m, nu), {}, {}});

    run_jobs(jobs, spec.jobs);

    for (const SweepJob& job : jobs)
        if (job.error) {
            try {
                std::rethrow_exception(job.error);
            } catch (const std::exception& e) {
                std::cerr << "run failed (nu=" << job.nu << ", m=" << job.m << "): " << e.what()
                          << "\n";
            }
            return 1;
        }

    if (kind == ExperimentKind::TaylorGreen) {
        std::vector<SweepRow> rows;
        for (const SweepJob& job : jobs) {
            if (!job.result->log.errors) return 1;
            rows.push_back({job.nu, job.m, *job.result->log.errors});
        }
        write_sweep_csv(spec.out_dir + "/tg_summary.csv", rows);
    }
    return 0;
}

int run_operator_check_experiment(const ExperimentSpec& spec) {
    std::filesystem::create_directories(spec.out_dir);
    std::ofstream report(spec.out_dir + "/operator_checks.txt");
    bool all_pass = true;
    for (int m : spec.mesh_m) {
        const std::string header = "== operator checks, m = " + std::to_string(m) + " ==";
        report << header << "\n";
        std::cout << header << "\n";
        for (const CheckResult& r : run_operator_checks(m)) {
            report << r.line() << "\n";
            std::cout << r.line() << "\n";
            all_pass = all_pass && r.pass;
        }
    }
    return all_pass ? 0 : 2;
}

}  // namespace

int run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case ExperimentKind::TaylorGreen:
            return run_sweep(spec, ExperimentKind::TaylorGreen);
        case ExperimentKind::Conservation:
        case ExperimentKind::Custom:
            return run_sweep(spec, spec.kind);
        case ExperimentKind::OperatorChecks:
            return run_operator_check_experiment(spec);
    }
    return 1;
}

}  // namespace egns
