#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "qrlab/bias.hpp"

using namespace qrlab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Superposition two_branch(double p_first, double v_first, double v_second, Origin origin) {
    return Superposition({
        {"a", {std::sqrt(p_first), 0.0}, v_first, origin},
        {"b", {std::sqrt(1.0 - p_first), 0.0}, v_second, origin},
    });
}

std::vector<double> probs_of(const Superposition& s) {
    std::vector<double> out;
    for (const auto& [label, p] : born_probabilities(s)) out.push_back(p);
    return out;
}

/// Random normalized superposition: up to max_branches branches, a mix of
/// external and CM-internal origins (2 mechanisms x up to 4 groups), mixed
/// valences, and the occasional zero-mass branch.  Every CM group gets at
/// least one branch with mass so group conservation stays meaningful.
Superposition random_super(RandomStream& rng, int max_branches = 16) {
    const int n = 1 + int(rng.next_u64() % max_branches);
    std::vector<Branch> branches;
    std::vector<double> weights;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const bool internal = rng.next_unit() < 0.6;
        const Origin origin = internal ? Origin::cm_internal(rng.next_u64() % 2, rng.next_u64() % 4)
                                       : Origin::external();
        double w = rng.next_unit() < 0.15 ? 0.0 : 0.05 + rng.next_unit();
        if (i == 0) w = 0.5 + rng.next_unit();  // guarantee some mass overall
        const double valence = -2.0 + 5.0 * rng.next_unit();
        branches.push_back({"b" + std::to_string(i), {0.0, rng.next_unit()},
                            rng.next_unit() < 0.2 ? 0.0 : valence, origin});
        weights.push_back(w);
        total += w;
    }
    // Make sure no CM group is entirely massless.
    for (int i = 0; i < n; ++i) {
        if (branches[i].origin.kind != OriginKind::CMInternal || weights[i] > 0.0) continue;
        bool group_has_mass = false;
        for (int j = 0; j < n; ++j) {
            if (j != i && branches[j].origin == branches[i].origin && weights[j] > 0.0) {
                group_has_mass = true;
            }
        }
        if (!group_has_mass) {
            weights[i] = 0.25;
            total += 0.25;
        }
    }
    for (int i = 0; i < n; ++i) branches[i].amplitude.modulus = std::sqrt(weights[i] / total);
    return Superposition(std::move(branches));
}

}  // namespace

TEST_CASE("zero strength is the exact identity for both variants") {
    RandomStream rng(101);
    for (int rep = 0; rep < 50; ++rep) {
        const Superposition s = random_super(rng);
        for (const BiasVariant variant : {BiasVariant::Original, BiasVariant::Modified}) {
            const Superposition biased = apply_bias(s, {variant, 0.0});
            const auto before = probs_of(s), after = probs_of(biased);
            for (std::size_t i = 0; i < before.size(); ++i) CHECK(after[i] == before[i]);
        }
    }
}

TEST_CASE("equal valences cancel for any variant and any strength") {
    for (const double beta : {0.0, 0.3, 2.0, 40.0, kInf}) {
        for (const BiasVariant variant : {BiasVariant::Original, BiasVariant::Modified}) {
            const Superposition s = two_branch(2.0 / 3.0, 1.5, 1.5, Origin::cm_internal(0, 0));
            const auto after = probs_of(apply_bias(s, {variant, beta}));
            CHECK(after[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
            CHECK(after[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("unscoped variant reweights the whole state") {
    SUBCASE("equal pair at valences (0, 1), strength 1") {
        // Weights (1, e^-1), so p0' = 1/(1+e^-1) = 0.731058578630005.
        const Superposition s = two_branch(0.5, 0.0, 1.0, Origin::external());
        const auto after = probs_of(apply_bias(s, BiasModel::original(1.0)));
        CHECK(after[0] == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-14));
        CHECK(after[1] == doctest::Approx(std::exp(-1.0) / (1.0 + std::exp(-1.0))).epsilon(1e-14));
        CHECK(after[0] == doctest::Approx(0.7310585786300049).epsilon(1e-12));
    }
    SUBCASE("infinite strength concentrates on the minimum valence") {
        const Superposition s = two_branch(0.5, 0.0, 1.0, Origin::cm_internal(0, 0));
        const auto after = probs_of(apply_bias(s, BiasModel::original(kInf)));
        CHECK(after[0] == 1.0);
        CHECK(after[1] == 0.0);
    }
    SUBCASE("negative valences attract probability") {
        const Superposition s = two_branch(0.5, -1.0, 0.0, Origin::external());
        const auto after = probs_of(apply_bias(s, BiasModel::original(1.0)));
        CHECK(after[0] > 0.7);
        CHECK(after[0] + after[1] == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("scoped variant conserves each internal group and spares the rest") {
    SUBCASE("external branches are untouched at any strength") {
        for (const double beta : {0.0, 0.7, 5.0, kInf}) {
            const Superposition s = two_branch(0.5, 1.0, 0.0, Origin::external());
            const auto after = probs_of(apply_bias(s, BiasModel::modified(beta)));
            CHECK(after[0] == probs_of(s)[0]);  // bitwise untouched
            CHECK(after[1] == probs_of(s)[1]);
        }
    }
    SUBCASE("an internal pair shifts exactly like the closed form") {
        const Superposition s = two_branch(0.5, 1.0, 0.0, Origin::cm_internal(0, 0));
        const auto after = probs_of(apply_bias(s, BiasModel::modified(2.0)));
        const double expected = 0.5 * std::exp(-2.0) / (0.5 * std::exp(-2.0) + 0.5);
        CHECK(after[0] == doctest::Approx(expected).epsilon(1e-13));
        CHECK(after[0] + after[1] == doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("the decision pair of the withdraw/continue picture at infinite strength") {
        // W neutral, C painful, equal weights: all mass moves to W.
        const Superposition s = Superposition({
            {"W", {std::sqrt(0.5), 0.0}, 0.0, Origin::cm_internal(0, 0)},
            {"C", {std::sqrt(0.5), 0.0}, 1.0, Origin::cm_internal(0, 0)},
        });
        const auto after = probs_of(apply_bias(s, BiasModel::modified(kInf)));
        CHECK(after[0] == 1.0);
        CHECK(after[1] == 0.0);
    }
    SUBCASE("two groups conserve their own totals, external mass untouched") {
        const Superposition s = Superposition({
            {"g1a", {std::sqrt(0.15), 0.0}, 0.0, Origin::cm_internal(0, 0)},
            {"g1b", {std::sqrt(0.25), 0.0}, 3.0, Origin::cm_internal(0, 0)},
            {"g2a", {std::sqrt(0.10), 0.0}, -1.0, Origin::cm_internal(0, 1)},
            {"g2b", {std::sqrt(0.30), 0.0}, 2.0, Origin::cm_internal(0, 1)},
            {"ext", {std::sqrt(0.20), 0.0}, 9.0, Origin::external()},
        });
        const auto before = probs_of(s);
        const auto after = probs_of(apply_bias(s, BiasModel::modified(1.3)));
        CHECK(after[0] + after[1] == doctest::Approx(before[0] + before[1]).epsilon(1e-13));
        CHECK(after[2] + after[3] == doctest::Approx(before[2] + before[3]).epsilon(1e-13));
        CHECK(after[4] == before[4]);
        CHECK(after[0] > before[0]);  // lower valence gains within its group
        CHECK(after[2] > before[2]);
    }
    SUBCASE("a massless group cannot conserve anything") {
        const Superposition s = Superposition({
            {"dead", {0.0, 0.0}, 0.0, Origin::cm_internal(1, 2)},
            {"live", {1.0, 0.0}, 0.0, Origin::external()},
        });
        CHECK_THROWS_AS(apply_bias(s, BiasModel::modified(1.0)), EmptyGroup);
    }
}

TEST_CASE("infinite strength is the exact limit of the finite rule") {
    SUBCASE("pro-rata split among tied minimum-valence branches") {
        const Superposition s = Superposition({
            {"a", {std::sqrt(0.1), 0.0}, 0.0, Origin::cm_internal(0, 0)},
            {"b", {std::sqrt(0.4), 0.0}, 0.0, Origin::cm_internal(0, 0)},
            {"c", {std::sqrt(0.5), 0.0}, 1.0, Origin::cm_internal(0, 0)},
        });
        const auto after = probs_of(apply_bias(s, BiasModel::modified(kInf)));
        CHECK(after[0] == doctest::Approx(0.2).epsilon(1e-13));
        CHECK(after[1] == doctest::Approx(0.8).epsilon(1e-13));
        CHECK(after[2] == 0.0);
        // ... and a very large finite strength lands on the same split.
        const auto finite = probs_of(apply_bias(s, BiasModel::modified(500.0)));
        CHECK(finite[0] == doctest::Approx(after[0]).epsilon(1e-12));
        CHECK(finite[1] == doctest::Approx(after[1]).epsilon(1e-12));
        CHECK(finite[2] == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("a massless minimum-valence branch stays massless") {
        const Superposition s = Superposition({
            {"ghost", {0.0, 0.0}, -5.0, Origin::cm_internal(0, 0)},
            {"real", {1.0, 0.0}, 4.0, Origin::cm_internal(0, 0)},
        });
        const auto after = probs_of(apply_bias(s, BiasModel::modified(kInf)));
        CHECK(after[0] == 0.0);
        CHECK(after[1] == 1.0);
    }
    SUBCASE("huge finite strengths do not underflow the scope away") {
        const Superposition s = two_branch(0.5, 700.0, 701.0, Origin::cm_internal(0, 0));
        const auto after = probs_of(apply_bias(s, BiasModel::modified(600.0)));
        CHECK(after[0] + after[1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(after[0] > 0.99);
    }
}

TEST_CASE("property battery over random superpositions") {
    RandomStream rng(202);
    const double betas[] = {0.0, 0.3, 2.0, 17.0, kInf};
    int checked = 0;
    for (int rep = 0; rep < 400; ++rep) {
        const Superposition s = random_super(rng);
        const BiasModel model{rep % 2 == 0 ? BiasVariant::Original : BiasVariant::Modified,
                              betas[rep % 5]};
        Superposition biased = apply_bias(s, model);
        const auto before = probs_of(s), after = probs_of(biased);

        // Total probability stays normalized.
        double total = 0.0;
        for (const double p : after) total += p;
        CHECK(std::abs(total - 1.0) <= 1e-12);

        // Group conservation under the scoped variant.
        if (model.variant == BiasVariant::Modified) {
            const auto& branches = s.branches();
            for (std::size_t i = 0; i < branches.size(); ++i) {
                if (branches[i].origin.kind != OriginKind::CMInternal) {
                    CHECK(after[i] == before[i]);  // external: bitwise untouched
                    continue;
                }
                double before_group = 0.0, after_group = 0.0;
                for (std::size_t j = 0; j < branches.size(); ++j) {
                    if (branches[j].origin == branches[i].origin) {
                        before_group += before[j];
                        after_group += after[j];
                    }
                }
                CHECK(std::abs(after_group - before_group) <= 1e-12);
            }
        }

        // Monotonicity: a lower-valence branch never loses relative ground
        // against a higher-valence one in the same scope.
        const auto& branches = s.branches();
        for (std::size_t i = 0; i < branches.size(); ++i) {
            for (std::size_t j = 0; j < branches.size(); ++j) {
                const bool same_scope =
                    model.variant == BiasVariant::Original ||
                    (branches[i].origin.kind == OriginKind::CMInternal &&
                     branches[i].origin == branches[j].origin);
                if (!same_scope || branches[i].valence >= branches[j].valence) continue;
                CHECK(after[i] * before[j] + 1e-15 >= before[i] * after[j]);
                ++checked;
            }
        }
    }
    CHECK(checked > 1000);  // the generator actually exercised the property
}

TEST_CASE("variants agree when everything lives in one internal group") {
    RandomStream rng(303);
    for (int rep = 0; rep < 60; ++rep) {
        const int n = 2 + int(rng.next_u64() % 6);
        std::vector<Branch> branches;
        double total = 0.0;
        std::vector<double> w(n);
        for (int i = 0; i < n; ++i) {
            w[i] = 0.05 + rng.next_unit();
            total += w[i];
        }
        for (int i = 0; i < n; ++i) {
            branches.push_back({"b" + std::to_string(i), {std::sqrt(w[i] / total), 0.0},
                                3.0 * rng.next_unit(), Origin::cm_internal(0, 0)});
        }
        const Superposition s(branches);
        const double beta = 3.0 * rng.next_unit();
        const auto original = probs_of(apply_bias(s, BiasModel::original(beta)));
        const auto modified = probs_of(apply_bias(s, BiasModel::modified(beta)));
        for (int i = 0; i < n; ++i) CHECK(original[i] == doctest::Approx(modified[i]).epsilon(1e-12));
    }
}

TEST_CASE("two-branch closed form") {
    SUBCASE("matches the documented formula under the unscoped variant") {
        CHECK(bias_shift(0.5, BiasModel::original(0.0)) == 0.5);
        const double beta = 0.04;
        const double expected = 0.5 * std::exp(-beta) / (0.5 * std::exp(-beta) + 0.5);
        CHECK(bias_shift(0.5, BiasModel::original(beta)) ==
              doctest::Approx(expected).epsilon(1e-15));
        // the planning point: strength 0.04 shifts 0.5 to 0.49 (1e-7 close)
        CHECK(bias_shift(0.5, BiasModel::original(beta)) == doctest::Approx(0.49).epsilon(1e-6));
        CHECK(bias_shift(0.5, BiasModel::original(kInf)) == 0.0);
    }
    SUBCASE("scoped variant leaves external decisions alone") {
        for (const double beta : {0.0, 0.04, 5.0, kInf}) {
            CHECK(bias_shift(0.3, BiasModel::modified(beta)) == 0.3);
        }
    }
    SUBCASE("endpoints are fixed points") {
        for (const double beta : {0.0, 1.0, 800.0, kInf}) {
            CHECK(bias_shift(0.0, BiasModel::original(beta)) == 0.0);
            CHECK(bias_shift(1.0, BiasModel::original(beta)) == 1.0);
        }
    }
    SUBCASE("agrees with apply_bias on the equivalent two-branch state") {
        RandomStream rng(404);
        for (int rep = 0; rep < 200; ++rep) {
            const double p = rng.next_unit();
            const double beta = rep % 7 == 0 ? kInf : 5.0 * rng.next_unit();
            for (const BiasVariant variant : {BiasVariant::Original, BiasVariant::Modified}) {
                const BiasModel model{variant, beta};
                const Superposition s = two_branch(p, 1.0, 0.0, Origin::external());
                double through_state = probs_of(apply_bias(s, model))[0];
                // bias_shift treats external-origin branches; under the
                // unscoped variant origin is irrelevant anyway.
                if (variant == BiasVariant::Modified) {
                    CHECK(bias_shift(p, model) == p);
                } else {
                    CHECK(bias_shift(p, model) == doctest::Approx(through_state).epsilon(1e-12));
                }
            }
        }
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(bias_shift(-0.1, BiasModel::original(1.0)), std::invalid_argument);
        CHECK_THROWS_AS(bias_shift(1.1, BiasModel::original(1.0)), std::invalid_argument);
        CHECK_THROWS_AS(bias_shift(0.5, BiasModel::original(-1.0)), std::invalid_argument);
    }
}

TEST_CASE("apply_bias validates its inputs") {
    const Superposition skewed({{"x", {1.0, 0.0}, 0.0, {}}, {"y", {1.0, 0.0}, 1.0, {}}});
    CHECK_THROWS_AS(apply_bias(skewed, BiasModel::original(1.0)), std::invalid_argument);
    const Superposition ok({{"x", {1.0, 0.0}, 0.0, {}}});
    CHECK_THROWS_AS(apply_bias(ok, BiasModel::original(-2.0)), std::invalid_argument);
}

TEST_CASE("bias preserves phases, labels, valences, origins, and order") {
    const Superposition s({
        {"one", {std::sqrt(0.5), 0.25}, 1.0, Origin::cm_internal(0, 0)},
        {"two", {std::sqrt(0.3), -1.5}, 0.0, Origin::cm_internal(0, 0)},
        {"ext", {std::sqrt(0.2), 3.0}, 2.0, Origin::external()},
    });
    const Superposition biased = apply_bias(s, BiasModel::modified(1.0));
    REQUIRE(biased.size() == 3);
    CHECK(biased[0].label == "one");
    CHECK(biased[0].amplitude.phase == 0.25);
    CHECK(biased[0].valence == 1.0);
    CHECK(biased[0].origin == Origin::cm_internal(0, 0));
    CHECK(biased[2].label == "ext");
    CHECK(biased[2].amplitude.phase == 3.0);
    CHECK(biased[2].amplitude.modulus == s[2].amplitude.modulus);
}
