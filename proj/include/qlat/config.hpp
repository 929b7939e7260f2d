#pragma once

// Declarative experiment configuration (YAML). Parsing fills in every
// default so that a parsed config re-serializes to a fully determined
// document; unknown keys are rejected.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qlat/dynamics.hpp"
#include "qlat/hamiltonians.hpp"

namespace YAML {
class Node;
}

namespace qlat {

using MatrixEntries = std::vector<std::vector<cplx>>;

// A chain operator described by name. pauli / weyl / level place the same
// single-site matrix on every listed site (so `sites: [0, 1, 2]` with
// label Z is a Z-string); matrix places one d^k x d^k block on k sites.
struct OperatorSpec {
    std::string kind = "pauli";          // identity | pauli | weyl | level | matrix
    std::string label = "X";             // pauli: X | Y | Z
    std::vector<int> r;                  // weyl: [r1, r2]
    std::vector<int> levels;             // level: [j, k] gives |j><k|
    MatrixEntries matrix;
    std::vector<int> sites = {0};
    std::string transform = "none";      // none | exp | exp_i
    double coefficient = 1.0;            // exp: e^{c A}, exp_i: e^{i c A}

    bool operator==(const OperatorSpec&) const = default;
};

struct ModelSpec {
    std::string name = "heisenberg";
    int j = 0;
    int k = 1;
    std::optional<OperatorSpec> on_site;  // onsite / custom
    MatrixEntries coupling;               // custom
    int count = 1;                        // random_onsite / random_coupled

    bool operator==(const ModelSpec&) const = default;
};

struct GeometrySpec {
    int sites = 2;
    int dim = 2;
    std::string boundary = "periodic";
    std::int64_t dense_cap = 4096;

    bool operator==(const GeometrySpec&) const = default;
};

struct GridSpec {
    std::vector<int> x = {0, 1, 2, 3};
    std::vector<double> t = {0.0};
    std::vector<double> g = {0.0};

    bool operator==(const GridSpec&) const = default;
};

struct TwistConfig {
    std::optional<OperatorSpec> generator;  // nullopt: model default
    std::vector<int> weights;               // empty: n(x) = x

    bool operator==(const TwistConfig&) const = default;
};

struct PropagatorConfig {
    std::string method = "auto";
    std::int64_t krylov_threshold = 1024;
    double krylov_tol = 1e-10;
    int krylov_max_dim = 40;

    bool operator==(const PropagatorConfig&) const = default;
};

struct ExperimentConfig {
    std::string experiment = "light_cone";
    std::uint64_t seed = 0;
    std::string precision = "double";  // double | high
    std::string output = "results";
    GeometrySpec geometry;
    std::vector<ModelSpec> models = {ModelSpec{}};
    OperatorSpec observable;
    OperatorSpec probe;
    OperatorSpec perturbation{"identity", "", {}, {}, {}, {0}, "none", 1.0};
    std::vector<int> sites = {0};
    GridSpec grids;
    TwistConfig twist;
    PropagatorConfig propagator;

    bool operator==(const ExperimentConfig&) const = default;
};

const std::vector<std::string>& experiment_kinds();

ExperimentConfig parse_config(const YAML::Node& root);
ExperimentConfig parse_config_string(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

// FNV-1a over the canonical serialization with the output path cleared.
std::string config_hash(const ExperimentConfig& cfg);

// Builders from the declarative specs.
ChainGeometry make_geometry(const GeometrySpec& g);
Matrix entries_to_matrix(const MatrixEntries& e);
MatrixEntries matrix_to_entries(const Matrix& m);
Matrix local_operator(const OperatorSpec& spec, int d);
LatticeOperator build_operator(const OperatorSpec& spec, const ChainGeometry& geom);
// Expands random_* entries into `count` seeded Hamiltonians.
std::vector<HamiltonianSpec> build_models(const std::vector<ModelSpec>& models, const ChainGeometry& geom,
                                          std::uint64_t seed);
PropagatorOptions make_propagator_options(const PropagatorConfig& p, const std::string& precision);
NormOptions make_norm_options(const std::string& precision, std::uint64_t seed);

// Seeded random matrices for the model zoo.
Matrix random_hermitian(int n, std::uint64_t seed);

}  // namespace qlat
