#include "random_models.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace mvtest {

using namespace mvstrat;

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Cartesian product of per-agent action lists.
std::vector<std::vector<ActionId>> joints(const std::vector<std::vector<ActionId>>& avail) {
    std::vector<std::vector<ActionId>> out{{}};
    for (const auto& options : avail) {
        std::vector<std::vector<ActionId>> next;
        for (const auto& prefix : out) {
            for (ActionId x : options) {
                auto j = prefix;
                j.push_back(x);
                next.push_back(std::move(j));
            }
        }
        out = std::move(next);
    }
    return out;
}

std::vector<ActionId> random_subset(std::mt19937_64& rng, const std::vector<ActionId>& all) {
    std::vector<ActionId> out;
    while (out.empty()) {
        for (ActionId x : all) {
            if (rng() % 2 == 0) {
                out.push_back(x);
            }
        }
    }
    return out;
}

} // namespace

Element random_element(std::mt19937_64& rng, const Lattice& l) {
    return Element{static_cast<std::uint32_t>(pick(rng, 0, l.size() - 1))};
}

MvCGS random_model(std::mt19937_64& rng, const InterpretedLattice& lattice, const RandomModelOptions& opts) {
    MvCGSBuilder b(lattice);
    const std::size_t n = pick(rng, opts.min_states, opts.max_states);
    std::vector<StateId> states;
    for (std::size_t i = 0; i < n; ++i) {
        states.push_back(b.state("s" + std::to_string(i)));
    }
    std::vector<AgentId> agents;
    for (std::size_t i = 0; i < opts.agents; ++i) {
        agents.push_back(b.agent(std::to_string(i + 1)));
    }
    const std::size_t k = pick(rng, 1, opts.max_actions);
    std::vector<ActionId> actions;
    for (std::size_t i = 0; i < k; ++i) {
        actions.push_back(b.action("a" + std::to_string(i)));
    }
    b.initial(states[0]);

    // avail[q][agent]
    std::vector<std::vector<std::vector<ActionId>>> avail(n, std::vector<std::vector<ActionId>>(opts.agents));
    for (std::size_t ai = 0; ai < opts.agents; ++ai) {
        std::vector<std::vector<StateId>> classes;
        if (opts.epistemic) {
            std::vector<std::size_t> label(n);
            const std::size_t blocks = pick(rng, 1, n);
            for (auto& x : label) {
                x = pick(rng, 0, blocks - 1);
            }
            for (std::size_t c = 0; c < blocks; ++c) {
                std::vector<StateId> members;
                for (std::size_t q = 0; q < n; ++q) {
                    if (label[q] == c) {
                        members.push_back(states[q]);
                    }
                }
                if (!members.empty()) {
                    classes.push_back(std::move(members));
                }
            }
            b.epistemic(agents[ai], classes);
        } else {
            for (std::size_t q = 0; q < n; ++q) {
                classes.push_back({states[q]});
            }
        }
        for (const auto& cls : classes) {
            const auto chosen = random_subset(rng, actions);
            for (StateId q : cls) {
                avail[q][ai] = chosen;
                b.available(agents[ai], q, chosen);
            }
        }
    }
    for (std::size_t q = 0; q < n; ++q) {
        for (auto& j : joints(avail[q])) {
            b.transition(states[q], std::move(j), states[pick(rng, 0, n - 1)]);
        }
    }
    for (const auto& p : opts.props) {
        b.proposition(p);
        for (std::size_t q = 0; q < n; ++q) {
            b.value(p, states[q], random_element(rng, lattice.lattice()));
        }
    }
    return b.build();
}

std::vector<ReductionMap> all_homomorphisms(const LatticePtr& l) {
    const auto elems = l->elements();
    const std::size_t n = elems.size();
    std::vector<ReductionMap> out;
    std::vector<std::uint32_t> f(n, 0);
    auto preserves = [&] {
        for (Element x : elems) {
            for (Element y : elems) {
                if (f[l->meet(x, y).id] != l->meet(Element{f[x.id]}, Element{f[y.id]}).id ||
                    f[l->join(x, y).id] != l->join(Element{f[x.id]}, Element{f[y.id]}).id) {
                    return false;
                }
            }
        }
        return true;
    };
    std::vector<std::size_t> free;
    for (Element x : elems) {
        if (x != l->bottom() && x != l->top()) {
            free.push_back(x.id);
        }
    }
    f[l->bottom().id] = l->bottom().id;
    f[l->top().id] = l->top().id;
    std::vector<std::size_t> digits(free.size(), 0);
    while (true) {
        for (std::size_t i = 0; i < free.size(); ++i) {
            f[free[i]] = static_cast<std::uint32_t>(digits[i]);
        }
        if (preserves()) {
            std::vector<Element> image;
            for (Element x : elems) {
                if (std::find(f.begin(), f.end(), x.id) != f.end()) {
                    image.push_back(x);
                }
            }
            std::vector<std::string> names;
            std::vector<std::pair<std::string, std::string>> hasse;
            for (Element x : image) {
                names.push_back(l->name(x));
                for (Element y : image) {
                    if (!l->less(x, y)) {
                        continue;
                    }
                    const bool cover = std::none_of(image.begin(), image.end(), [&](Element z) {
                        return l->less(x, z) && l->less(z, y);
                    });
                    if (cover) {
                        hasse.emplace_back(l->name(x), l->name(y));
                    }
                }
            }
            std::map<std::string, std::string> by_name;
            for (Element x : elems) {
                by_name[l->name(x)] = l->name(Element{f[x.id]});
            }
            out.push_back(make_reduction_map(l, Lattice::make(names, hasse), by_name));
        }
        std::size_t i = 0;
        while (i < digits.size() && ++digits[i] == n) {
            digits[i++] = 0;
        }
        if (i == digits.size()) {
            break;
        }
    }
    return out;
}

MayMustStructure random_may_must(std::mt19937_64& rng, std::size_t max_states) {
    MayMustStructure k;
    const std::size_t n = pick(rng, 1, max_states);
    for (std::size_t i = 0; i < n; ++i) {
        k.states.push_back("s" + std::to_string(i));
    }
    for (const char* p : {"p", "q"}) {
        std::vector<Kleene> v(n);
        for (auto& x : v) {
            x = static_cast<Kleene>(pick(rng, 0, 2));
        }
        k.valuation.emplace_back(p, std::move(v));
    }
    for (StateId q = 0; q < n; ++q) {
        std::vector<StateId> targets(n);
        std::iota(targets.begin(), targets.end(), StateId{0});
        std::shuffle(targets.begin(), targets.end(), rng);
        const std::size_t outs = pick(rng, 1, std::min<std::size_t>(n, 3));
        for (std::size_t i = 0; i < outs; ++i) {
            k.may.emplace_back(q, targets[i]);
            if (rng() % 2 == 0) {
                k.must.emplace_back(q, targets[i]);
            }
        }
    }
    return k;
}

} // namespace mvtest
