#include <cmath>

#include "csae/losses.hpp"
#include "csae/rng.hpp"
#include "csae/wavelet.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace csae;
using namespace csae::losses;

namespace {

Matrix mat2(double a, double b, double c, double d) {
    Matrix m(2, 2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

// random pair whose wavelet detail differences stay away from the L1 kink, so
// finite differences are valid
std::pair<Matrix, Matrix> kink_free_pair(std::size_t side, std::size_t levels, std::uint64_t seed) {
    Rng rng(seed);
    for (int attempt = 0; attempt < 200; ++attempt) {
        Matrix x = oracles::random_matrix(side, side, rng);
        Matrix y = oracles::random_matrix(side, side, rng);
        const auto px = wavelet::dwt2(x, levels);
        const auto py = wavelet::dwt2(y, levels);
        double min_gap = 1e18;
        for (std::size_t q = 0; q < levels; ++q)
            for (int t = 0; t < 3; ++t)
                for (std::size_t i = 0; i < px.details[q][t].size(); ++i)
                    min_gap = std::min(min_gap, std::abs(px.details[q][t].data()[i] -
                                                         py.details[q][t].data()[i]));
        if (min_gap > 1e-3) return {x, y};
    }
    FAIL("could not build a kink-free pair");
    return {Matrix(), Matrix()};
}

}  // namespace

TEST_CASE("mse basics") {
    Rng rng(1);
    const Matrix a = oracles::random_matrix(3, 5, rng);
    CHECK(mse(a, a) == 0.0);
    Matrix b = a;
    for (std::size_t i = 0; i < b.size(); ++i) b.data()[i] += 1.0;
    CHECK(mse(b, a) == doctest::Approx(1.0));
    CHECK(mse(mat2(1, 2, 3, 4), mat2(1, 2, 3, 0)) == doctest::Approx(4.0));
    CHECK_THROWS_AS(mse(Matrix(2, 2), Matrix(3, 2)), std::invalid_argument);
}

TEST_CASE("l1 basics") {
    Rng rng(2);
    const Matrix a = oracles::random_matrix(4, 4, rng);
    CHECK(l1(a, a) == 0.0);
    Matrix b = a;
    for (std::size_t i = 0; i < b.size(); ++i) b.data()[i] += 1.0;
    CHECK(l1(b, a) == doctest::Approx(1.0));
    CHECK(l1(mat2(1, 2, 3, 4), mat2(1, 2, 3, 0)) == doctest::Approx(1.0));
}

TEST_CASE("mse and l1 are symmetric and vanish only at equality") {
    Rng rng(3);
    const Matrix a = oracles::random_matrix(6, 6, rng);
    const Matrix b = oracles::random_matrix(6, 6, rng);
    CHECK(mse(a, b) == doctest::Approx(mse(b, a)));
    CHECK(l1(a, b) == doctest::Approx(l1(b, a)));
    CHECK(mse(a, b) > 0.0);
    CHECK(l1(a, b) > 0.0);
}

TEST_CASE("loss1: alignment, hand value, batch mean") {
    Matrix z(1, 2), mu(1, 2);
    z(0, 0) = 1;
    mu(0, 1) = 1;
    CHECK(loss1(z, z) == 0.0);
    CHECK(loss1(z, mu) == doctest::Approx(1.0));  // (1+1)/2

    // per-sample values 1 and 3 average to 2
    Matrix zb(2, 2), mb(2, 2);
    zb(0, 0) = 1;                       // sample 0: (1,0) vs (0,1) -> 1
    mb(0, 1) = 1;
    zb(1, 0) = std::sqrt(6.0);          // sample 1: 6/2 = 3
    CHECK(loss1(zb, mb) == doctest::Approx(2.0));
}

TEST_CASE("loss1 gradient is zero at the centroid and matches finite differences") {
    Matrix z(2, 3), mu(2, 3);
    Rng rng(5);
    for (std::size_t i = 0; i < z.size(); ++i) mu.data()[i] = rng.uniform();
    z = mu;
    const Matrix g0 = loss1_gradient(z, mu);
    for (std::size_t i = 0; i < g0.size(); ++i) CHECK(g0.data()[i] == 0.0);

    for (std::size_t i = 0; i < z.size(); ++i) z.data()[i] += rng.uniform() - 0.5;
    const Matrix g = loss1_gradient(z, mu);
    std::vector<double*> params;
    for (std::size_t i = 0; i < z.size(); ++i) params.push_back(&z.storage()[i]);
    const auto fd = oracles::fd_gradient([&] { return loss1(z, mu); }, params);
    std::vector<double> an(g.data(), g.data() + g.size());
    CHECK(oracles::max_rel_error(an, fd) < 1e-6);
}

TEST_CASE("loss2: zero at equality, constant-image hand value") {
    LossWeights w;
    w.levels = 1;
    const Matrix x(2, 2, 0.0);
    const Matrix xs(2, 2, 1.0);
    const Loss2Report zero = loss2(x, x, w);
    CHECK(zero.total == 0.0);
    CHECK(zero.approx_mse == 0.0);
    CHECK(zero.detail_l1[0][0] == 0.0);

    // b* = 2, b = 0 on the single 1x1 approx entry: MSE = 4
    const Loss2Report r = loss2(xs, x, w);
    CHECK(r.approx_mse == doctest::Approx(4.0));
    CHECK(r.total == doctest::Approx(4.0));
    CHECK(r.detail_l1[0][0] == 0.0);
    CHECK(r.detail_l1[0][1] == 0.0);
    CHECK(r.detail_l1[0][2] == 0.0);
}

TEST_CASE("loss2 grows when the diagonal weight grows") {
    Rng rng(6);
    const Matrix x = oracles::random_matrix(8, 8, rng);
    const Matrix xs = oracles::random_matrix(8, 8, rng);
    LossWeights w;
    w.levels = 2;
    const double base = loss2(xs, x, w).total;
    w.diag_weight *= 2.0;
    CHECK(loss2(xs, x, w).total > base);
}

TEST_CASE("loss2 rejects incompatible shapes") {
    LossWeights w;
    w.levels = 2;
    CHECK_THROWS_AS(loss2(Matrix(8, 8), Matrix(4, 4), w), std::invalid_argument);
    CHECK_THROWS_AS(loss2(Matrix(6, 6), Matrix(6, 6), w), std::invalid_argument);
}

TEST_CASE("total_loss and reports") {
    CHECK(total_loss(0, 0) == 0.0);
    CHECK(total_loss(1.5, 2.5) == doctest::Approx(4.0));
    CHECK(total_loss(1.0, 2.0, 0.5) == doctest::Approx(2.0));

    Loss2Report l2;
    l2.total = 2.5;
    const LossReport rep = make_report(1.5, l2);
    CHECK(rep.total == rep.loss1 + rep.loss2.total);  // exact
}

TEST_CASE("l1 gradient entries take only the three subgradient values") {
    Rng rng(7);
    const Matrix a = oracles::random_matrix(4, 4, rng);
    Matrix b = a;
    b(0, 0) += 1.0;
    b(1, 1) -= 2.0;
    const Matrix g = l1_gradient(b, a);
    const double unit = 1.0 / 16.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double v = g.data()[i];
        CHECK((v == 0.0 || v == unit || v == -unit));
    }
    CHECK(g(0, 0) == unit);
    CHECK(g(1, 1) == -unit);
}

TEST_CASE("loss2 gradient matches finite differences away from kinks") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        auto [xs, x] = kink_free_pair(8, 2, seed);
        LossWeights w;
        w.levels = 2;
        const Matrix g = loss2_gradient(xs, x, w);
        std::vector<double*> params;
        for (std::size_t i = 0; i < xs.size(); ++i) params.push_back(&xs.storage()[i]);
        const auto fd = oracles::fd_gradient([&] { return loss2(xs, x, w).total; }, params);
        std::vector<double> an(g.data(), g.data() + g.size());
        CHECK(oracles::max_rel_error(an, fd) < 1e-4);
    }
}

TEST_CASE("batch loss2 averages per-image values") {
    Rng rng(21);
    const Matrix x0 = oracles::random_matrix(8, 8, rng);
    const Matrix x1 = oracles::random_matrix(8, 8, rng);
    const Matrix y0 = oracles::random_matrix(8, 8, rng);
    const Matrix y1 = oracles::random_matrix(8, 8, rng);
    LossWeights w;
    Matrix xb(2, 64), yb(2, 64);
    for (std::size_t i = 0; i < 64; ++i) {
        xb(0, i) = x0.data()[i];
        xb(1, i) = x1.data()[i];
        yb(0, i) = y0.data()[i];
        yb(1, i) = y1.data()[i];
    }
    const Loss2Report r = batch_loss2(xb, yb, 8, w);
    const double expect = 0.5 * (loss2(x0, y0, w).total + loss2(x1, y1, w).total);
    CHECK(r.total == doctest::Approx(expect).epsilon(1e-12));
}
