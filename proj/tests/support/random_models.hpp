#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "mvstrat/cgs.hpp"
#include "mvstrat/lattice.hpp"

namespace mvtest {

struct RandomModelOptions {
    std::size_t min_states = 1;
    std::size_t max_states = 8;
    std::size_t agents = 2;
    std::size_t max_actions = 3;
    std::vector<std::string> props{"p", "q"};
    // Random partitions per agent, with availability uniform on each class.
    bool epistemic = false;
};

// Total transition function; agents "1".."n", actions "a0".."a(k-1)",
// states "s0".., initial s0.
mvstrat::MvCGS random_model(std::mt19937_64& rng, const mvstrat::InterpretedLattice& lattice,
                            const RandomModelOptions& opts = {});

mvstrat::Element random_element(std::mt19937_64& rng, const mvstrat::Lattice& l);

// Every bound-preserving lattice homomorphism of l into itself, each with its
// image as target sublattice. Brute force, so only for lattices of at most
// seven elements.
std::vector<mvstrat::ReductionMap> all_homomorphisms(const mvstrat::LatticePtr& l);

mvstrat::MayMustStructure random_may_must(std::mt19937_64& rng, std::size_t max_states = 6);

} // namespace mvtest
