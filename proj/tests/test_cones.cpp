#include "fourblock/cones.hpp"

#include <functional>
#include <numeric>
#include <set>
#include <string>

#include "doctest.h"
#include "fourblock/rng.hpp"

using namespace fourblock;

namespace {

IntVector iv(std::initializer_list<long> xs) {
    IntVector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (long x : xs) v(i++) = BigInt(x);
    return v;
}

RatVector rp(std::initializer_list<long> xs) {
    RatVector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (long x : xs) v(i++) = Rational(x);
    return v;
}

std::string column_set_key(const IntMatrix& m) {
    std::set<std::string> cols;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        std::string c;
        for (Eigen::Index i = 0; i < m.rows(); ++i) c += m(i, j).str() + ",";
        cols.insert(c);
    }
    std::string key;
    for (const auto& c : cols) key += c + "|";
    return key;
}

IntMatrix mat2(long a, long b, long c, long d) {
    IntMatrix m(2, 2);
    m(0, 0) = BigInt(a);
    m(0, 1) = BigInt(b);
    m(1, 0) = BigInt(c);
    m(1, 1) = BigInt(d);
    return m;
}

}  // namespace

TEST_CASE("basis enumeration counts match brute force") {
    BasisSet b11 = enumerate_bases(1, 1);
    REQUIRE(b11.bases.size() == 2);

    BasisSet b21 = enumerate_bases(2, 1);
    long expect = 0;
    for (long a = -1; a <= 1; ++a)
        for (long b = -1; b <= 1; ++b)
            for (long c = -1; c <= 1; ++c)
                for (long d = -1; d <= 1; ++d)
                    if (a * d - b * c != 0) ++expect;
    CHECK(static_cast<long>(b21.bases.size()) == expect);

    ConeParams tight;
    tight.enumeration_cap = 10;
    CHECK_THROWS_AS(enumerate_bases(2, 2, tight), Error);
}

TEST_CASE("generating bases of the worked witness match the six listed column sets") {
    BasisSet bases = enumerate_bases(2, 1);
    auto u = generating_bases(rp({9, 18}), bases);
    std::set<std::string> got;
    for (const auto& m : u) got.insert(column_set_key(m));
    std::set<std::string> expect;
    expect.insert(column_set_key(mat2(1, 0, -1, 1)));
    expect.insert(column_set_key(mat2(1, 0, 0, 1)));
    expect.insert(column_set_key(mat2(1, -1, 0, 1)));
    expect.insert(column_set_key(mat2(1, 0, 1, 1)));
    expect.insert(column_set_key(mat2(1, -1, 1, 1)));
    expect.insert(column_set_key(mat2(1, -1, 1, 0)));
    CHECK(got == expect);
}

TEST_CASE("generating bases edge cases") {
    BasisSet bases = enumerate_bases(2, 1);
    CHECK(generating_bases(rp({0, 0}), bases).size() == bases.bases.size());
    BasisSet b1 = enumerate_bases(1, 1);
    auto u = generating_bases(rp({1}), b1);
    REQUIRE(u.size() == 1);
    CHECK(u[0](0, 0) == BigInt(1));
}

TEST_CASE("intersection generators reproduce the worked cone and the identity cone") {
    BasisSet bases = enumerate_bases(2, 1);
    auto u = generating_bases(rp({9, 18}), bases);
    GeneratorSet p = intersection_generators(u);
    REQUIRE(p.generators.size() == 2);
    CHECK(p.generators[0] == iv({0, 1}));
    CHECK(p.generators[1] == iv({1, 1}));

    std::vector<IntMatrix> only_identity = {mat2(1, 0, 0, 1)};
    GeneratorSet q = intersection_generators(only_identity);
    REQUIRE(q.generators.size() == 2);
    CHECK(q.generators[0] == iv({0, 1}));
    CHECK(q.generators[1] == iv({1, 0}));
}

TEST_CASE("random witness: generators live in every cone and regenerate the witness") {
    Rng rng(3);
    BasisSet bases = enumerate_bases(2, 1);
    BigInt psi = compute_psi(bases);
    for (int rep = 0; rep < 25; ++rep) {
        RatVector w(2);
        w(0) = Rational(rng.range(-12, 12));
        w(1) = Rational(rng.range(-12, 12));
        auto u = generating_bases(w, bases);
        GeneratorSet p = intersection_generators(u);
        for (const auto& g : p.generators) {
            for (const auto& basis : u) {
                RatVector y = inverse(basis) * to_rational(g);
                for (Eigen::Index i = 0; i < 2; ++i) {
                    REQUIRE(y(i).sign() >= 0);
                    REQUIRE((y(i) * Rational(psi)).is_integer());
                }
            }
        }
        REQUIRE(in_cone(p.generators, w));
    }
}

TEST_CASE("cone equality against the basis intersection on random sample points") {
    Rng rng(17);
    BasisSet bases = enumerate_bases(2, 1);
    auto u = generating_bases(rp({7, 3}), bases);
    GeneratorSet p = intersection_generators(u);
    for (int rep = 0; rep < 200; ++rep) {
        RatVector x(2);
        x(0) = Rational(BigInt(rng.range(-30, 30)), BigInt(rng.range(1, 5)));
        x(1) = Rational(BigInt(rng.range(-30, 30)), BigInt(rng.range(1, 5)));
        bool in_intersection = true;
        for (const auto& basis : u)
            if (!in_cone_of_basis(basis, x)) { in_intersection = false; break; }
        REQUIRE(in_intersection == in_cone(p.generators, x));
    }
}

TEST_CASE("psi values") {
    CHECK(compute_psi(enumerate_bases(2, 1)) == BigInt(2));
    CHECK(compute_psi(enumerate_bases(1, 1)) == BigInt(1));
    // brute force over all 5^4 candidate matrices
    BigInt expect(1);
    for (long a = -2; a <= 2; ++a)
        for (long b = -2; b <= 2; ++b)
            for (long c = -2; c <= 2; ++c)
                for (long d = -2; d <= 2; ++d) {
                    long dt = a * d - b * c;
                    if (dt != 0) expect = lcm(expect, BigInt(dt < 0 ? -dt : dt));
                }
    CHECK(compute_psi(enumerate_bases(2, 2)) == expect);
}

TEST_CASE("phi values against a direct normal-perpendicular scan") {
    CHECK(compute_phi(1, 1) == BigInt(1));
    CHECK(compute_phi(2, 1) == BigInt(1));

    // d = 2 candidates are the perpendiculars of single adjugate rows.
    auto brute_phi = [](long delta) {
        long best = delta;
        for (long a = -delta; a <= delta; ++a)
            for (long b = -delta; b <= delta; ++b)
                for (long c = -delta; c <= delta; ++c)
                    for (long d = -delta; d <= delta; ++d) {
                        if (a * d - b * c == 0) continue;
                        long rows[2][2] = {{d, -b}, {-c, a}};
                        for (auto& row : rows) {
                            long px = -row[1], py = row[0];
                            if (px == 0 && py == 0) continue;
                            long g = std::gcd(std::abs(px), std::abs(py));
                            long norm = std::max(std::abs(px), std::abs(py)) / g;
                            best = std::max(best, norm);
                        }
                    }
        return best;
    };
    CHECK(compute_phi(2, 1) == BigInt(brute_phi(1)));
    CHECK(compute_phi(2, 2) == BigInt(brute_phi(2)));
}

TEST_CASE("caratheodory selection on the worked example and edges") {
    GeneratorSet p;
    p.generators = {iv({0, 1}), iv({1, 1})};
    CaratheodorySelection sel = caratheodory_select(p, rp({9, 18}));
    REQUIRE(sel.v.size() == 2);
    CHECK(sel.v[0] == iv({0, 1}));
    CHECK(sel.v[1] == iv({1, 1}));
    CHECK(sel.mu(0) == Rational(9));
    CHECK(sel.mu(1) == Rational(9));

    // single generator scaled
    GeneratorSet single;
    single.generators = {iv({2, 1})};
    sel = caratheodory_select(single, rp({6, 3}));
    REQUIRE(sel.v.size() == 1);
    CHECK(sel.mu(0) == Rational(3));

    // witness on a lower-dimensional face uses fewer generators
    sel = caratheodory_select(p, rp({0, 4}));
    REQUIRE(sel.v.size() == 1);
    CHECK(sel.v[0] == iv({0, 1}));

    // witness 0 selects the empty set
    sel = caratheodory_select(p, rp({0, 0}));
    CHECK(sel.v.empty());

    CHECK_THROWS_AS(caratheodory_select(single, rp({0, 1})), Error);
}

TEST_CASE("caratheodory reconstructs random cone points exactly") {
    Rng rng(31);
    BasisSet bases = enumerate_bases(2, 1);
    for (int rep = 0; rep < 30; ++rep) {
        RatVector w(2);
        w(0) = Rational(rng.range(-9, 9));
        w(1) = Rational(rng.range(-9, 9));
        GeneratorSet p = intersection_generators(generating_bases(w, bases));
        CaratheodorySelection sel = caratheodory_select(p, w);
        RatVector sum = RatVector::Constant(2, Rational(0));
        for (size_t i = 0; i < sel.v.size(); ++i) sum += sel.mu(static_cast<Eigen::Index>(i)) * to_rational(sel.v[i]);
        REQUIRE(sum == w);
        for (Eigen::Index i = 0; i < sel.mu.size(); ++i) REQUIRE(sel.mu(i).sign() > 0);
    }
}

TEST_CASE("extend_to_basis") {
    IntMatrix full = extend_to_basis({iv({0, 1}), iv({1, 1})}, 2);
    CHECK(full(0, 0) == BigInt(0));
    CHECK(full(1, 0) == BigInt(1));
    CHECK(full(0, 1) == BigInt(1));
    CHECK(full(1, 1) == BigInt(1));

    IntMatrix ext = extend_to_basis({iv({0, 1})}, 2);
    CHECK(ext(0, 0) == BigInt(0));
    CHECK(ext(1, 0) == BigInt(1));
    CHECK(ext(0, 1) == BigInt(1));
    CHECK(ext(1, 1) == BigInt(0));

    IntMatrix id = extend_to_basis({}, 2);
    CHECK(det(id) == BigInt(1));
}
