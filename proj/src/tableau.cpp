#include "frontfix/tableau.hpp"

#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>

#include "json.hpp"

#include "frontfix/error.hpp"

namespace frontfix {

std::string_view to_string(PairId id) noexcept {
    switch (id) {
        case PairId::DP: return "DP";
        case PairId::CK: return "CK";
        case PairId::BS: return "BS";
        case PairId::ST: return "ST";
        case PairId::PP: return "PP";
    }
    return "?";
}

std::optional<PairId> parse_pair_id(std::string_view text) noexcept {
    for (PairId id : {PairId::DP, PairId::CK, PairId::BS, PairId::ST, PairId::PP}) {
        if (text == to_string(id)) return id;
    }
    return std::nullopt;
}

void ButcherPair::validate() const {
    auto fail = [this](const std::string& what) {
        throw SolverError(ErrorKind::tableau_defect, name + ": " + what);
    };
    const std::size_t s = stages();
    if (s < 2 || a.size() != s || b5.size() != s || b4.size() != s) fail("inconsistent stage count");
    for (std::size_t i = 0; i < s; ++i) {
        if (a[i].size() != i) fail("stage row " + std::to_string(i) + " has wrong length");
        double row = 0.0;
        for (double x : a[i]) row += x;
        if (std::abs(row - c[i]) > 1e-13) fail("row sum differs from node at stage " + std::to_string(i));
    }
    auto moment = [this, s](const std::vector<double>& b, int power) {
        double sum = 0.0;
        for (std::size_t i = 0; i < s; ++i) sum += b[i] * std::pow(c[i], power);
        return sum;
    };
    if (std::abs(moment(b5, 0) - 1.0) > 1e-13) fail("fifth-order weights do not sum to 1");
    if (std::abs(moment(b4, 0) - 1.0) > 1e-13) fail("fourth-order weights do not sum to 1");
    for (int p = 1; p <= 3; ++p) {
        if (std::abs(moment(b5, p) - 1.0 / (p + 1)) > 1e-12) {
            fail("fifth-order quadrature condition fails at power " + std::to_string(p));
        }
        if (std::abs(moment(b4, p) - 1.0 / (p + 1)) > 1e-12) {
            fail("fourth-order quadrature condition fails at power " + std::to_string(p));
        }
    }
}

bool ButcherPair::first_same_as_last() const noexcept {
    const std::size_t s = stages();
    if (c[s - 1] != 1.0 || b5[s - 1] != 0.0) return false;
    for (std::size_t j = 0; j + 1 < s; ++j) {
        if (a[s - 1][j] != b5[j]) return false;
    }
    return true;
}

namespace {

constexpr double q(double num, double den) { return num / den; }

ButcherPair dormand_prince() {
    ButcherPair p;
    p.id = PairId::DP;
    p.name = "Dormand-Prince 5(4)";
    p.c = {0.0, q(1, 5), q(3, 10), q(4, 5), q(8, 9), 1.0, 1.0};
    p.a = {
        {},
        {q(1, 5)},
        {q(3, 40), q(9, 40)},
        {q(44, 45), q(-56, 15), q(32, 9)},
        {q(19372, 6561), q(-25360, 2187), q(64448, 6561), q(-212, 729)},
        {q(9017, 3168), q(-355, 33), q(46732, 5247), q(49, 176), q(-5103, 18656)},
        {q(35, 384), 0.0, q(500, 1113), q(125, 192), q(-2187, 6784), q(11, 84)},
    };
    p.b5 = {q(35, 384), 0.0, q(500, 1113), q(125, 192), q(-2187, 6784), q(11, 84), 0.0};
    p.b4 = {q(5179, 57600), 0.0, q(7571, 16695), q(393, 640), q(-92097, 339200), q(187, 2100), q(1, 40)};
    return p;
}

ButcherPair cash_karp() {
    ButcherPair p;
    p.id = PairId::CK;
    p.name = "Cash-Karp 5(4)";
    p.c = {0.0, q(1, 5), q(3, 10), q(3, 5), 1.0, q(7, 8)};
    p.a = {
        {},
        {q(1, 5)},
        {q(3, 40), q(9, 40)},
        {q(3, 10), q(-9, 10), q(6, 5)},
        {q(-11, 54), q(5, 2), q(-70, 27), q(35, 27)},
        {q(1631, 55296), q(175, 512), q(575, 13824), q(44275, 110592), q(253, 4096)},
    };
    p.b5 = {q(37, 378), 0.0, q(250, 621), q(125, 594), 0.0, q(512, 1771)};
    p.b4 = {q(2825, 27648), 0.0, q(18575, 48384), q(13525, 55296), q(277, 14336), q(1, 4)};
    return p;
}

ButcherPair bogacki_shampine() {
    ButcherPair p;
    p.id = PairId::BS;
    p.name = "Bogacki-Shampine 5(4)";
    p.c = {0.0, q(1, 6), q(2, 9), q(3, 7), q(2, 3), q(3, 4), 1.0, 1.0};
    p.a = {
        {},
        {q(1, 6)},
        {q(2, 27), q(4, 27)},
        {q(183, 1372), q(-162, 343), q(1053, 1372)},
        {q(68, 297), q(-4, 11), q(42, 143), q(1960, 3861)},
        {q(597, 22528), q(81, 352), q(63099, 585728), q(58653, 366080), q(4617, 20480)},
        {q(174197, 959244), q(-30942, 79937), q(8152137, 19744439), q(666106, 1039181), q(-29421, 29068),
         q(482048, 414219)},
        {q(587, 8064), 0.0, q(4440339, 15491840), q(24353, 124800), q(387, 44800), q(2152, 5985), q(7267, 94080)},
    };
    p.b5 = {q(587, 8064), 0.0, q(4440339, 15491840), q(24353, 124800), q(387, 44800), q(2152, 5985), q(7267, 94080),
            0.0};
    p.b4 = {q(2479, 34992), 0.0, q(123, 416), q(612941, 3411720), q(43, 1440), q(2272, 6561), q(79937, 1113912),
            q(3293, 556956)};
    return p;
}

ButcherPair tsitouras() {
    ButcherPair p;
    p.id = PairId::ST;
    p.name = "Tsitouras 5(4)";
    p.c = {0.0, 0.161, 0.327, 0.9, 0.9800255409045097, 1.0, 1.0};
    p.a = {
        {},
        {0.161},
        {-0.008480655492356989, 0.335480655492357},
        {2.897153057105493, -6.359448489975075, 4.3622954328695815},
        {5.325864828439257, -11.748883564062828, 7.4955393428898365, -0.09249506636175525},
        {5.86145544294642, -12.92096931784711, 8.159367898576159, -0.071584973281401, -0.028269050394068383},
        {0.09646076681806523, 0.01, 0.4798896504144996, 1.379008574103742, -3.290069515436081, 2.324710524099774},
    };
    p.b5 = {0.09646076681806523, 0.01, 0.4798896504144996, 1.379008574103742, -3.290069515436081, 2.324710524099774,
            0.0};
    p.b4 = {0.09468075576583945, 0.009183565540343254, 0.4877705284247616, 1.234297566930479, -2.7077123499835256,
            1.866628418170587, 0.015151515151515152};
    return p;
}

ButcherPair checked(ButcherPair pair) {
    pair.validate();
    pair.fsal = pair.first_same_as_last();
    return pair;
}

}  // namespace

const ButcherPair& tableau(PairId id) {
    static const ButcherPair dp = checked(dormand_prince());
    static const ButcherPair ck = checked(cash_karp());
    static const ButcherPair bs = checked(bogacki_shampine());
    static const ButcherPair st = checked(tsitouras());
    switch (id) {
        case PairId::DP: return dp;
        case PairId::CK: return ck;
        case PairId::BS: return bs;
        case PairId::ST: return st;
        case PairId::PP: break;
    }
    throw SolverError(ErrorKind::unknown_tableau,
                      "pair PP has no bundled coefficients; supply them with a pair file");
}

ButcherPair load_pair(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SolverError(ErrorKind::invalid_config, "cannot open pair file " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw SolverError(ErrorKind::invalid_config, "pair file " + path + ": " + e.what());
    }
    ButcherPair p;
    try {
        const auto id = parse_pair_id(doc.at("id").get<std::string>());
        if (!id) throw SolverError(ErrorKind::unknown_tableau, "unknown pair id in " + path);
        p.id = *id;
        p.name = doc.value("name", std::string(to_string(p.id)));
        p.c = doc.at("c").get<std::vector<double>>();
        p.a = doc.at("a").get<std::vector<std::vector<double>>>();
        p.b5 = doc.at("b5").get<std::vector<double>>();
        p.b4 = doc.at("b4").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw SolverError(ErrorKind::invalid_config, "pair file " + path + ": " + e.what());
    }
    return checked(std::move(p));
}

}  // namespace frontfix
