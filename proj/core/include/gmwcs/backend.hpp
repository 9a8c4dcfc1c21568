#ifndef GMWCS_BACKEND_HPP
#define GMWCS_BACKEND_HPP

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmwcs/formulation.hpp"

namespace gmwcs {

class BackendError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RelaxationSolution {
    std::vector<double> values;  // indexed like MipModel::variables()
    double objective = 0.0;
    bool integral = false;       // binaries are 0/1 in `values`
};

/// Something that can solve the relaxation of a MipModel (binaries relaxed
/// to [0, 1]) and accept extra rows between solves. The reported objective
/// must bound the integer optimum of the current row set from above. A
/// backend that also enforces integrality reports `integral`.
class RelaxationBackend {
public:
    virtual ~RelaxationBackend() = default;

    virtual void load(const MipModel &model) = 0;
    virtual void add_constraints(std::span<const LinearConstraint> rows) = 0;
    virtual RelaxationSolution solve() = 0;
};

/// Exact integer optimum by exhaustive search (oracle-backed); graphs up to
/// kBinaryEnumerateMaxVertices vertices.
class ExhaustiveBackend final : public RelaxationBackend {
public:
    void load(const MipModel &model) override;
    void add_constraints(std::span<const LinearConstraint> rows) override;
    RelaxationSolution solve() override;

private:
    std::optional<MipModel> model_;
};

/// Shells out to an external solver. Each solve writes the current model as
/// LP text, runs `command` with "{lp}" and "{sol}" replaced by file paths,
/// and reads back "<name> <value>" lines; variables absent from the file are
/// zero. A non-zero exit status or unreadable output raises BackendError.
class ExternalLpBackend final : public RelaxationBackend {
public:
    explicit ExternalLpBackend(std::string command, std::filesystem::path work_dir = std::filesystem::temp_directory_path());

    void load(const MipModel &model) override;
    void add_constraints(std::span<const LinearConstraint> rows) override;
    RelaxationSolution solve() override;

private:
    std::string command_;
    std::filesystem::path work_dir_;
    std::optional<MipModel> model_;
};

/// Reads "<name> <value>" pairs (blank and '#' lines skipped) into values
/// for `model`. Throws BackendError on unknown names or malformed lines.
std::vector<double> read_value_file(const MipModel &model, const std::filesystem::path &path);

}  // namespace gmwcs

#endif  // GMWCS_BACKEND_HPP
