#include "gmwcs/backend.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "gmwcs/format.hpp"
#include "gmwcs/oracle.hpp"

namespace gmwcs {

namespace {

bool binaries_integral(const MipModel &model, std::span<const double> values) {
    const auto vars = model.variables();
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (!vars[i].binary) continue;
        if (std::abs(values[i]) > 1e-9 && std::abs(values[i] - 1.0) > 1e-9) return false;
    }
    return true;
}

std::string replace_all(std::string text, const std::string &token, const std::string &value) {
    for (std::size_t pos = text.find(token); pos != std::string::npos; pos = text.find(token, pos + value.size()))
        text.replace(pos, token.size(), value);
    return text;
}

}  // namespace

void ExhaustiveBackend::load(const MipModel &model) { model_ = model; }

void ExhaustiveBackend::add_constraints(std::span<const LinearConstraint> rows) {
    if (!model_) throw BackendError("no model loaded");
    for (const auto &row : rows) model_->add_constraint(row);
}

RelaxationSolution ExhaustiveBackend::solve() {
    if (!model_) throw BackendError("no model loaded");
    std::optional<FeasiblePoint> best;
    try {
        best = maximize_integer(*model_);
    } catch (const OracleSizeError &e) {
        throw BackendError(e.what());
    }
    if (!best) throw BackendError("model is infeasible");
    return {std::move(best->assignment.values), best->objective, true};
}

ExternalLpBackend::ExternalLpBackend(std::string command, std::filesystem::path work_dir)
    : command_(std::move(command)), work_dir_(std::move(work_dir)) {}

void ExternalLpBackend::load(const MipModel &model) { model_ = model; }

void ExternalLpBackend::add_constraints(std::span<const LinearConstraint> rows) {
    if (!model_) throw BackendError("no model loaded");
    for (const auto &row : rows) model_->add_constraint(row);
}

RelaxationSolution ExternalLpBackend::solve() {
    if (!model_) throw BackendError("no model loaded");
    static std::atomic<unsigned> serial{0};
    const std::string stem = "gmwcs_" + std::to_string(::getpid()) + "_" + std::to_string(serial++);
    const auto lp_path = work_dir_ / (stem + ".lp");
    const auto sol_path = work_dir_ / (stem + ".sol");
    {
        std::ofstream out(lp_path);
        if (!out) throw BackendError("cannot write " + lp_path.string());
        out << export_lp(*model_);
    }
    std::filesystem::remove(sol_path);
    const std::string command = replace_all(replace_all(command_, "{lp}", lp_path.string()), "{sol}", sol_path.string());
    const int status = std::system(command.c_str());
    std::filesystem::remove(lp_path);
    if (status != 0) throw BackendError("external solver command failed with status " + std::to_string(status));
    if (!std::filesystem::exists(sol_path)) throw BackendError("external solver produced no value file");

    RelaxationSolution solution;
    solution.values = read_value_file(*model_, sol_path);
    std::filesystem::remove(sol_path);
    solution.objective = model_->evaluate_objective(solution.values);
    solution.integral = binaries_integral(*model_, solution.values);
    return solution;
}

std::vector<double> read_value_file(const MipModel &model, const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw BackendError("cannot read " + path.string());
    std::vector<double> values(model.variables().size(), 0.0);
    std::string line;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
        std::istringstream fields(line);
        std::string name, value_text, extra;
        if (!(fields >> name) || name.front() == '#') continue;
        if (!(fields >> value_text) || (fields >> extra))
            throw BackendError(path.string() + ":" + std::to_string(number) + ": expected '<name> <value>'");
        auto index = model.find_variable(name);
        if (!index) throw BackendError(path.string() + ":" + std::to_string(number) + ": unknown variable " + name);
        auto value = parse_real(value_text);
        if (!value) throw BackendError(path.string() + ":" + std::to_string(number) + ": bad value " + value_text);
        values[*index] = *value;
    }
    return values;
}

}  // namespace gmwcs
