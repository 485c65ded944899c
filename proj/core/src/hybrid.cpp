#include "htqc/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace htqc::oracle {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

cplx coherent_overlap(cplx beta, cplx gamma) {
    return std::exp(-(std::norm(beta) + std::norm(gamma)) / 2.0 +
                    std::conj(beta) * gamma);
}

Eigen::Matrix3cd CvBasis::gram() const {
    const cplx a(amplitude, 0.0);
    std::array<cplx, 3> v{a, -a, cplx(0.0, 0.0)};
    Eigen::Matrix3cd g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g(i, j) = coherent_overlap(v[i], v[j]);
    return g;
}

cplx label_overlap(const BasisLabel& a, const BasisLabel& b) {
    cplx r(1.0, 0.0);
    for (std::size_t m = 0; m < a.cv.size(); ++m)
        r *= coherent_overlap(a.cv[m], b.cv[m]);
    for (std::size_t m = 0; m < a.dv.size(); ++m)
        if (a.dv[m] != b.dv[m]) return cplx(0.0, 0.0);
    return r;
}

void HybridState::add_term(cplx coeff, std::vector<cplx> cv,
                           std::vector<DvKet> dv) {
    if (static_cast<int>(cv.size()) != n_cv_ ||
        static_cast<int>(dv.size()) != n_dv_)
        throw std::invalid_argument("term arity mismatch");
    terms_.push_back({coeff, {std::move(cv), std::move(dv)}});
}

cplx HybridState::inner(const HybridState& other) const {
    cplx r(0.0, 0.0);
    for (const auto& a : terms_)
        for (const auto& b : other.terms_)
            r += std::conj(a.coeff) * b.coeff * label_overlap(a.label, b.label);
    return r;
}

double HybridState::norm() const { return std::sqrt(std::abs(inner(*this))); }

void HybridState::normalize() {
    const double n = norm();
    if (n <= 0.0) throw std::runtime_error("cannot normalize null state");
    for (auto& t : terms_) t.coeff /= n;
}

void HybridState::apply_x(int cv_mode, int dv_mode) {
    for (auto& t : terms_) {
        t.label.cv[cv_mode] = -t.label.cv[cv_mode];
        auto& d = t.label.dv[dv_mode];
        if (d == DvKet::H)
            d = DvKet::V;
        else if (d == DvKet::V)
            d = DvKet::H;
    }
}

void HybridState::apply_z(int dv_mode) {
    for (auto& t : terms_)
        if (t.label.dv[dv_mode] == DvKet::V) t.coeff = -t.coeff;
}

void HybridState::split_cv(int mode) {
    for (auto& t : terms_) {
        const cplx half = t.label.cv[mode] * kInvSqrt2;
        t.label.cv[mode] = half;
        t.label.cv.insert(t.label.cv.begin() + mode + 1, half);
    }
    ++n_cv_;
}

HybridDensity HybridDensity::from_state(const HybridState& s) {
    HybridDensity rho;
    rho.n_cv_ = s.n_cv();
    rho.n_dv_ = s.n_dv();
    for (const auto& k : s.terms())
        for (const auto& b : s.terms())
            rho.terms_.push_back(
                {k.coeff * std::conj(b.coeff), k.label, b.label});
    return rho;
}

double HybridDensity::trace() const {
    cplx r(0.0, 0.0);
    for (const auto& t : terms_) r += t.coeff * label_overlap(t.bra, t.ket);
    return r.real();
}

void HybridDensity::apply_cv_loss(int mode, double eta) {
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("eta out of range");
    const double keep = std::sqrt(1.0 - eta);
    for (auto& t : terms_) {
        const cplx beta = t.ket.cv[mode];
        const cplx gamma = t.bra.cv[mode];
        t.coeff *= std::exp(-eta * (std::norm(beta) + std::norm(gamma)) / 2.0 +
                            eta * std::conj(gamma) * beta);
        t.ket.cv[mode] = keep * beta;
        t.bra.cv[mode] = keep * gamma;
    }
}

void HybridDensity::apply_dv_loss(int mode, double eta) {
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("eta out of range");
    const double keep = std::sqrt(1.0 - eta);
    std::vector<Term> out;
    out.reserve(terms_.size() * 2);
    for (auto& t : terms_) {
        const DvKet x = t.ket.dv[mode];
        const DvKet y = t.bra.dv[mode];
        if (x == DvKet::Vac && y == DvKet::Vac) {
            out.push_back(std::move(t));
        } else if (x == y) {
            Term lost = t;
            lost.coeff *= eta;
            lost.ket.dv[mode] = DvKet::Vac;
            lost.bra.dv[mode] = DvKet::Vac;
            t.coeff *= 1.0 - eta;
            out.push_back(std::move(t));
            out.push_back(std::move(lost));
        } else if (x != DvKet::Vac && y != DvKet::Vac) {
            t.coeff *= 1.0 - eta;
            out.push_back(std::move(t));
        } else {
            t.coeff *= keep;
            out.push_back(std::move(t));
        }
    }
    terms_ = std::move(out);
}

void HybridDensity::apply_loss(double eta) {
    for (int m = 0; m < n_cv_; ++m) apply_cv_loss(m, eta);
    for (int m = 0; m < n_dv_; ++m) apply_dv_loss(m, eta);
}

namespace {

// quantized key so numerically identical labels collapse to one basis vector
std::string label_key(const BasisLabel& l) {
    std::string k;
    char buf[64];
    for (const auto& a : l.cv) {
        std::snprintf(buf, sizeof(buf), "%.9f,%.9f;", a.real(), a.imag());
        k += buf;
    }
    for (const auto& d : l.dv) k += static_cast<char>('0' + static_cast<int>(d));
    return k;
}

}  // namespace

Eigen::MatrixXcd HybridDensity::physical_matrix() const {
    std::map<std::string, int> index;
    std::vector<const BasisLabel*> labels;
    auto intern = [&](const BasisLabel& l) {
        auto [it, inserted] = index.try_emplace(label_key(l),
                                                static_cast<int>(labels.size()));
        if (inserted) labels.push_back(&l);
        return it->second;
    };
    std::vector<std::pair<std::pair<int, int>, cplx>> entries;
    entries.reserve(terms_.size());
    for (const auto& t : terms_)
        entries.push_back({{intern(t.ket), intern(t.bra)}, t.coeff});

    const int n = static_cast<int>(labels.size());
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& [ij, v] : entries) c(ij.first, ij.second) += v;
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g(i, j) = label_overlap(*labels[i], *labels[j]);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXcd sq =
        es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    Eigen::MatrixXcd phys = sq * c * sq;
    return (phys + phys.adjoint()) / 2.0;
}

namespace {

// PNPD projector elements after interfering the two measured modes on a
// balanced beam splitter: zero clicks, a positive even count, an odd count.
cplx f_zero(cplx y, cplx x) {
    return std::exp(-(std::norm(x) + std::norm(y)) / 2.0);
}
cplx f_even_pos(cplx y, cplx x) {
    return f_zero(y, x) * (std::cosh(std::conj(y) * x) - 1.0);
}
cplx f_odd(cplx y, cplx x) {
    return f_zero(y, x) * std::sinh(std::conj(y) * x);
}

cplx ba_element(HBSMOutcome o, cplx x1, cplx x2, cplx y1, cplx y2) {
    const cplx xc = (x1 + x2) * kInvSqrt2, xd = (x1 - x2) * kInvSqrt2;
    const cplx yc = (y1 + y2) * kInvSqrt2, yd = (y1 - y2) * kInvSqrt2;
    switch (o) {
        case HBSMOutcome::PsiPlus: return f_even_pos(yc, xc) * f_zero(yd, xd);
        case HBSMOutcome::PsiMinus: return f_odd(yc, xc) * f_zero(yd, xd);
        case HBSMOutcome::PhiPlus: return f_zero(yc, xc) * f_even_pos(yd, xd);
        case HBSMOutcome::PhiMinus: return f_zero(yc, xc) * f_odd(yd, xd);
        case HBSMOutcome::Fail: return f_zero(yc, xc) * f_zero(yd, xd);
        default: throw std::invalid_argument("not a CV outcome");
    }
}

// <x0 x1|(HH +/- VV)/sqrt2>
cplx bell_amp(DvKet x0, DvKet x1, int sign) {
    if (x0 == DvKet::H && x1 == DvKet::H) return kInvSqrt2;
    if (x0 == DvKet::V && x1 == DvKet::V) return sign * kInvSqrt2;
    return cplx(0.0, 0.0);
}

}  // namespace

std::map<HBSMOutcome, double> hbsm_distribution(const HybridState& state,
                                                double eta) {
    if (state.n_cv() != 2 || state.n_dv() != 2)
        throw std::invalid_argument("hbsm expects a two-qubit state");
    HybridDensity rho = HybridDensity::from_state(state);
    rho.apply_cv_loss(0, eta);
    rho.apply_cv_loss(1, eta);
    // the closed forms book the polarization loss of one measurement as a
    // single photon-loss event
    rho.apply_dv_loss(0, eta);

    std::map<HBSMOutcome, double> p{
        {HBSMOutcome::PsiPlus, 0.0},     {HBSMOutcome::PsiMinus, 0.0},
        {HBSMOutcome::PhiPlus, 0.0},     {HBSMOutcome::PhiMinus, 0.0},
        {HBSMOutcome::BsSuccessPlus, 0.0},
        {HBSMOutcome::BsSuccessMinus, 0.0},
        {HBSMOutcome::Fail, 0.0}};

    for (const auto& t : rho.terms()) {
        const cplx x1 = t.ket.cv[0], x2 = t.ket.cv[1];
        const cplx y1 = t.bra.cv[0], y2 = t.bra.cv[1];
        const double dv_id = (t.ket.dv[0] == t.bra.dv[0] &&
                              t.ket.dv[1] == t.bra.dv[1])
                                 ? 1.0
                                 : 0.0;
        for (auto o : {HBSMOutcome::PsiPlus, HBSMOutcome::PsiMinus,
                       HBSMOutcome::PhiPlus, HBSMOutcome::PhiMinus})
            p[o] += (t.coeff * ba_element(o, x1, x2, y1, y2)).real() * dv_id;

        const cplx cv_fail = ba_element(HBSMOutcome::Fail, x1, x2, y1, y2);
        const cplx bp = std::conj(bell_amp(t.bra.dv[0], t.bra.dv[1], +1)) *
                        bell_amp(t.ket.dv[0], t.ket.dv[1], +1);
        const cplx bm = std::conj(bell_amp(t.bra.dv[0], t.bra.dv[1], -1)) *
                        bell_amp(t.ket.dv[0], t.ket.dv[1], -1);
        p[HBSMOutcome::BsSuccessPlus] += (t.coeff * cv_fail * bp).real();
        p[HBSMOutcome::BsSuccessMinus] += (t.coeff * cv_fail * bm).real();
        p[HBSMOutcome::Fail] +=
            (t.coeff * cv_fail * (dv_id - bp - bm)).real();
    }
    return p;
}

HybridState plus_logical(double amplitude) {
    HybridState s(1, 1);
    s.add_term(kInvSqrt2, {cplx(amplitude, 0.0)}, {DvKet::H});
    s.add_term(kInvSqrt2, {cplx(-amplitude, 0.0)}, {DvKet::V});
    return s;
}

namespace {

struct MeasureResult {
    double prob;
    HybridState post;
};

// CV Bell measurement on a pure state with +/-alpha amplitudes on the
// measured modes. The post-measurement state is exact coefficient picking:
// within the span {|aa>,|-a-a>} (or {|a-a>,|-aa>}) the PNPD projectors are
// effectively rank one.
MeasureResult ba_measure(const HybridState& s, int m1, int m2,
                         HBSMOutcome o) {
    double prob = 0.0;
    for (const auto& a : s.terms())
        for (const auto& b : s.terms()) {
            cplx rest(1.0, 0.0);
            for (int m = 0; m < s.n_cv(); ++m)
                if (m != m1 && m != m2)
                    rest *= coherent_overlap(b.label.cv[m], a.label.cv[m]);
            if (a.label.dv != b.label.dv) continue;
            prob += (std::conj(b.coeff) * a.coeff *
                     ba_element(o, a.label.cv[m1], a.label.cv[m2],
                                b.label.cv[m1], b.label.cv[m2]) *
                     rest)
                        .real();
        }

    HybridState post(s.n_cv() - 2, s.n_dv());
    if (o == HBSMOutcome::Fail) return {prob, std::move(post)};
    for (const auto& t : s.terms()) {
        const int s1 = t.label.cv[m1].real() >= 0.0 ? +1 : -1;
        const int s2 = t.label.cv[m2].real() >= 0.0 ? +1 : -1;
        double pick = 0.0;
        switch (o) {
            case HBSMOutcome::PsiPlus:
                pick = (s1 == s2) ? 1.0 : 0.0;
                break;
            case HBSMOutcome::PsiMinus:
                pick = (s1 == s2) ? s1 : 0.0;
                break;
            case HBSMOutcome::PhiPlus:
                pick = (s1 != s2) ? 1.0 : 0.0;
                break;
            case HBSMOutcome::PhiMinus:
                pick = (s1 != s2) ? s1 : 0.0;
                break;
            default:
                throw std::invalid_argument("not a heralded CV outcome");
        }
        if (pick == 0.0) continue;
        std::vector<cplx> cv;
        for (int m = 0; m < s.n_cv(); ++m)
            if (m != m1 && m != m2) cv.push_back(t.label.cv[m]);
        post.add_term(t.coeff * pick, std::move(cv), t.label.dv);
    }
    if (!post.terms().empty()) post.normalize();
    return {prob, std::move(post)};
}

// Type-I fusion of DV modes (d1, d2) into one output mode: a polarizing
// beam splitter keeps mode d1's transmission port and detects the other
// port behind a pi/2-rotator. The one-click success operators are
//   K_H = (|H><HH| + |H><HV| + |V><VH| - |V><VV|)/2
//   K_V = (|H><HH| + |H><HV| - |V><VH| + |V><VV|)/2
// with a second rotator at the d2 input, and
//   K_H = (|H><HH| + |V><VV|)/2,  K_V = (|H><HH| - |V><VV|)/2
// without it.
MeasureResult bi_fuse(const HybridState& s, int d1, int d2, BiClick click,
                      bool rotator) {
    if (click == BiClick::Fail)
        throw std::invalid_argument("fusion outcome must be a click");
    HybridState post(s.n_cv(), s.n_dv() - 1);
    for (const auto& t : s.terms()) {
        const DvKet a = t.label.dv[d1];
        const DvKet b = t.label.dv[d2];
        if (a == DvKet::Vac || b == DvKet::Vac) continue;
        double factor = 0.0;
        DvKet out = DvKet::H;
        if (rotator) {
            out = (a == DvKet::H) ? DvKet::H : DvKet::V;
            factor = 0.5;
            if (a == DvKet::V && b == DvKet::V) factor = -0.5;
            if (click == BiClick::V) {
                factor = 0.5;
                if (a == DvKet::V && b == DvKet::H) factor = -0.5;
            }
        } else {
            if (a != b) continue;
            out = a;
            factor = 0.5;
            if (click == BiClick::V && a == DvKet::V) factor = -0.5;
        }
        std::vector<DvKet> dv;
        for (int m = 0; m < s.n_dv(); ++m) {
            if (m == d2) continue;
            dv.push_back(m == d1 ? out : t.label.dv[m]);
        }
        post.add_term(t.coeff * factor, t.label.cv, std::move(dv));
    }
    const double prob = post.terms().empty() ? 0.0 : post.norm() * post.norm();
    if (prob > 0.0) post.normalize();
    return {prob, std::move(post)};
}

}  // namespace

C3Result generate_c3(double alpha, HBSMOutcome ba1, HBSMOutcome ba2,
                     BiClick click, bool prime) {
    if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
    if (click == BiClick::Fail)
        throw std::invalid_argument("fusion outcome must be a click");
    for (auto o : {ba1, ba2})
        if (o != HBSMOutcome::PsiPlus && o != HBSMOutcome::PsiMinus &&
            o != HBSMOutcome::PhiPlus && o != HBSMOutcome::PhiMinus)
            throw std::invalid_argument("CV measurement outcome required");

    const double amps[4] = {std::sqrt(2.0) * alpha, std::sqrt(2.0) * alpha,
                            alpha, std::sqrt(2.0) * alpha};
    HybridState in(4, 4);
    for (int pattern = 0; pattern < 16; ++pattern) {
        std::vector<cplx> cv(4);
        std::vector<DvKet> dv(4);
        for (int q = 0; q < 4; ++q) {
            const bool v = (pattern >> q) & 1;
            cv[q] = cplx(v ? -amps[q] : amps[q], 0.0);
            dv[q] = v ? DvKet::V : DvKet::H;
        }
        in.add_term(0.25, std::move(cv), std::move(dv));
    }
    in.split_cv(0);  // qubit 1 -> cv (0,1)
    in.split_cv(2);  // qubit 2 -> cv (2,3)
    in.split_cv(5);  // qubit 4 -> cv (5,6)

    const double p_fail1 = ba_measure(in, 1, 2, HBSMOutcome::Fail).prob;
    auto m1 = ba_measure(in, 1, 2, ba1);
    if (m1.prob <= 0.0) throw std::runtime_error("outcome has zero probability");
    // after dropping cv modes 1,2 the second pair (4,5) sits at (2,3)
    const double p_fail2 = ba_measure(m1.post, 2, 3, HBSMOutcome::Fail).prob;
    auto m2 = ba_measure(m1.post, 2, 3, ba2);
    if (m2.prob <= 0.0) throw std::runtime_error("outcome has zero probability");

    auto mh = bi_fuse(m2.post, 1, 2, BiClick::H, !prime);
    auto mv = bi_fuse(m2.post, 1, 2, BiClick::V, !prime);
    auto& fused = (click == BiClick::H) ? mh : mv;
    if (fused.prob <= 0.0)
        throw std::runtime_error("outcome has zero probability");

    const double success =
        (1.0 - p_fail1) * (1.0 - p_fail2) * (mh.prob + mv.prob);
    return {std::move(fused.post), success};
}

HybridState c3_reference(double alpha) {
    const cplx a(alpha, 0.0);
    HybridState s(3, 3);
    s.add_term(0.5, {a, a, a}, {DvKet::H, DvKet::H, DvKet::H});
    s.add_term(0.5, {a, a, -a}, {DvKet::H, DvKet::H, DvKet::V});
    s.add_term(0.5, {-a, -a, a}, {DvKet::V, DvKet::V, DvKet::H});
    s.add_term(-0.5, {-a, -a, -a}, {DvKet::V, DvKet::V, DvKet::V});
    return s;
}

HybridState c3prime_reference(double alpha) {
    const cplx a(alpha, 0.0);
    HybridState s(3, 3);
    s.add_term(kInvSqrt2, {a, a, a}, {DvKet::H, DvKet::H, DvKet::H});
    s.add_term(kInvSqrt2, {-a, -a, -a}, {DvKet::V, DvKet::V, DvKet::V});
    return s;
}

namespace {

int cv_outcome_index(HBSMOutcome o) {
    switch (o) {
        case HBSMOutcome::PsiPlus: return 0;
        case HBSMOutcome::PsiMinus: return 1;
        case HBSMOutcome::PhiPlus: return 2;
        case HBSMOutcome::PhiMinus: return 3;
        default: throw std::invalid_argument("not a heralded CV outcome");
    }
}

// correction table, rows (ba1, ba2), columns (H click, V click)
const char* kCorrection[16][2] = {
    {"", "Z1"},        // psi+ psi+
    {"Z3", "Z2Z3"},    // psi+ psi-
    {"Z2", ""},        // psi+ phi+
    {"Z2Z3", "X3Z2Z3"},// psi+ phi-
    {"Z2", ""},        // psi- psi+
    {"Z2Z3", "Z3"},    // psi- psi-
    {"", "Z2"},        // psi- phi+
    {"X3Z2Z3", "Z2Z3"},// psi- phi-
    {"X1", "X1Z1"},    // phi+ psi+
    {"X2", "X1Z2Z3"},  // phi+ psi-
    {"X1Z2", "X1"},    // phi+ phi+
    {"X1Z2Z3", "X1Z3"},// phi+ phi-
    {"X2Z2Z3", "X1"},  // phi- psi+
    {"X2Z2", "X2"},    // phi- psi-
    {"X1", "X1Z2"},    // phi- phi+
    {"X2", "X1Z2Z3"},  // phi- phi-
};

}  // namespace

std::string pauli_correction(HBSMOutcome ba1, HBSMOutcome ba2, BiClick click) {
    if (click == BiClick::Fail)
        throw std::invalid_argument("no correction for a failed fusion");
    const int row = cv_outcome_index(ba1) * 4 + cv_outcome_index(ba2);
    return kCorrection[row][click == BiClick::H ? 0 : 1];
}

std::string c3prime_correction(HBSMOutcome ba1, HBSMOutcome ba2,
                               BiClick click) {
    if (click == BiClick::Fail)
        throw std::invalid_argument("no correction for a failed fusion");
    const int i1 = cv_outcome_index(ba1), i2 = cv_outcome_index(ba2);
    if (i1 > 1 || i2 > 1)
        throw std::invalid_argument("defined for psi outcome pairs");
    const bool mixed = (i1 != i2);
    const bool flip = mixed != (click == BiClick::V);
    return flip ? "Z3" : "";
}

void apply_pauli_string(HybridState& s, const std::string& pauli) {
    if (pauli.size() % 2 != 0) throw std::invalid_argument("bad pauli string");
    for (std::size_t i = 0; i < pauli.size(); i += 2) {
        const int q = pauli[i + 1] - '1';
        if (q < 0 || q > 2) throw std::invalid_argument("bad qubit index");
        if (pauli[i] == 'X')
            s.apply_x(q, q);
        else if (pauli[i] == 'Z')
            s.apply_z(q);
        else
            throw std::invalid_argument("bad pauli letter");
    }
}

namespace {

// post-measurement coefficient matrix on the two surviving neighbor modes,
// logical basis (|a a>, |a -a>, |-a a>, |-a -a>), given a lossy CV Bell
// measurement on the middle modes of (n0, m0, m1, n1)
Eigen::Matrix4cd neighbor_matrix(const HybridState& four_modes, double eta) {
    HybridDensity rho = HybridDensity::from_state(four_modes);
    rho.apply_cv_loss(1, eta);
    rho.apply_cv_loss(2, eta);
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    auto idx = [](const BasisLabel& l) {
        return (l.cv[0].real() < 0.0 ? 2 : 0) + (l.cv[3].real() < 0.0 ? 1 : 0);
    };
    for (const auto& t : rho.terms()) {
        const cplx e = ba_element(HBSMOutcome::PsiPlus, t.ket.cv[1],
                                  t.ket.cv[2], t.bra.cv[1], t.bra.cv[2]);
        m(idx(t.ket), idx(t.bra)) += t.coeff * e;
    }
    m /= m.trace();
    return m;
}

HybridState hadamard_pair(double alpha, bool first) {
    // first: (|aa>+|a-a>+|-aa>-|-a-a>)/2 x (|aa>+|-a-a>)/sqrt2, else swapped
    const cplx a(alpha, 0.0);
    HybridState s(4, 0);
    for (int sa = 0; sa < 2; ++sa)
        for (int sb = 0; sb < 2; ++sb)
            for (int sc = 0; sc < 2; ++sc) {
                const cplx u = sa ? -a : a, v = sb ? -a : a, w = sc ? -a : a;
                const double sign = (sa && sb) ? -1.0 : 1.0;
                const double c = 0.5 * kInvSqrt2 * sign;
                if (first)
                    s.add_term(c, {u, v, w, w}, {});
                else
                    s.add_term(c, {w, w, u, v}, {});
            }
    return s;
}

}  // namespace

BaChannelReport ba_induced_channel(double eta, double alpha) {
    const Eigen::Matrix4cd m1 = neighbor_matrix(hadamard_pair(alpha, true), eta);
    const Eigen::Matrix4cd m2 =
        neighbor_matrix(hadamard_pair(alpha, false), eta);
    const Eigen::Matrix4cd mix = (m1 + m2) / 2.0;

    Eigen::Vector4cd v;
    v << 0.5, 0.5, 0.5, -0.5;  // ideal fused pair in the logical basis
    auto weight = [&](bool za, bool zb) {
        Eigen::Vector4cd p = v;
        for (int i = 0; i < 4; ++i) {
            if (za && (i & 2)) p(i) = -p(i);
            if (zb && (i & 1)) p(i) = -p(i);
        }
        return (p.adjoint() * mix * p)(0).real();
    };
    BaChannelReport r;
    r.placement1 = m1.cwiseAbs();
    r.placement2 = m2.cwiseAbs();
    r.w_ii = weight(false, false);
    r.w_zi = weight(true, false);
    r.w_iz = weight(false, true);
    r.w_zz = weight(true, true);
    return r;
}

namespace {

// logical-block matrix of an n-mode DV-only density, basis index binary
// over modes (H=0, V=1); terms touching vacuum are dropped
Eigen::MatrixXcd dv_logical_matrix(const HybridDensity& rho, int n_modes) {
    const int dim = 1 << n_modes;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    auto idx = [&](const BasisLabel& l) {
        int k = 0;
        for (int i = 0; i < n_modes; ++i) {
            if (l.dv[i] == DvKet::Vac) return -1;
            k = (k << 1) | (l.dv[i] == DvKet::V ? 1 : 0);
        }
        return k;
    };
    for (const auto& t : rho.terms()) {
        const int i = idx(t.ket), j = idx(t.bra);
        if (i >= 0 && j >= 0) m(i, j) += t.coeff;
    }
    return m;
}

bool matches_pure(const Eigen::MatrixXcd& block,
                  const Eigen::VectorXcd& target) {
    const cplx tr = block.trace();
    if (std::abs(tr) < 1e-14) return false;
    Eigen::MatrixXcd want = target * target.adjoint();
    want /= want.trace();
    return ((block / tr) - want).cwiseAbs().maxCoeff() < 1e-10;
}

}  // namespace

bool verify_bs_losstolerance(double eta) {
    // (|HH>+|VV>)/sqrt2 on modes (0,1); fused cluster part on (2,3)
    HybridState s(0, 4);
    const double c = kInvSqrt2 * 0.5;
    for (int b = 0; b < 2; ++b)
        for (int p = 0; p < 4; ++p) {
            const DvKet d0 = b ? DvKet::V : DvKet::H;
            const DvKet d2 = (p & 2) ? DvKet::V : DvKet::H;
            const DvKet d3 = (p & 1) ? DvKet::V : DvKet::H;
            s.add_term(p == 3 ? -c : c, {}, {d0, d0, d2, d3});
        }
    HybridDensity rho = HybridDensity::from_state(s);
    for (int m = 0; m < 4; ++m) rho.apply_dv_loss(m, eta);

    // project modes (1,2) onto (|HH>+|VV>)/sqrt2 and trace them out
    HybridDensity post;
    {
        std::vector<HybridDensity::Term> terms;
        for (const auto& t : rho.terms()) {
            const cplx amp = std::conj(bell_amp(t.bra.dv[1], t.bra.dv[2], +1)) *
                             bell_amp(t.ket.dv[1], t.ket.dv[2], +1);
            if (amp == cplx(0.0, 0.0)) continue;
            HybridDensity::Term nt;
            nt.coeff = t.coeff * amp;
            nt.ket = {{}, {t.ket.dv[0], t.ket.dv[3]}};
            nt.bra = {{}, {t.bra.dv[0], t.bra.dv[3]}};
            terms.push_back(std::move(nt));
        }
        post = HybridDensity::from_state(HybridState(0, 2));
        post.terms() = std::move(terms);
    }
    Eigen::VectorXcd target(4);
    target << 0.5, 0.5, 0.5, -0.5;
    return matches_pure(dv_logical_matrix(post, 2), target);
}

bool verify_bi_losstolerance(double eta) {
    HybridState s(0, 4);
    const DvKet H = DvKet::H, V = DvKet::V;
    s.add_term(0.5, {}, {H, H, H, H});
    s.add_term(0.5, {}, {H, H, V, V});
    s.add_term(0.5, {}, {V, V, H, H});
    s.add_term(0.5, {}, {V, V, V, V});
    HybridDensity rho = HybridDensity::from_state(s);
    for (int m = 0; m < 4; ++m) rho.apply_dv_loss(m, eta);

    // success operator K_H of the rotator fusion on modes (1,2)
    auto kmap = [](DvKet a, DvKet b, DvKet& out) {
        if (a == DvKet::Vac || b == DvKet::Vac) return 0.0;
        out = (a == DvKet::H) ? DvKet::H : DvKet::V;
        return (a == DvKet::V && b == DvKet::V) ? -0.5 : 0.5;
    };
    HybridDensity post;
    {
        std::vector<HybridDensity::Term> terms;
        for (const auto& t : rho.terms()) {
            DvKet ko, bo;
            const double fk = kmap(t.ket.dv[1], t.ket.dv[2], ko);
            const double fb = kmap(t.bra.dv[1], t.bra.dv[2], bo);
            if (fk == 0.0 || fb == 0.0) continue;
            HybridDensity::Term nt;
            nt.coeff = t.coeff * fk * fb;
            nt.ket = {{}, {t.ket.dv[0], ko, t.ket.dv[3]}};
            nt.bra = {{}, {t.bra.dv[0], bo, t.bra.dv[3]}};
            terms.push_back(std::move(nt));
        }
        post = HybridDensity::from_state(HybridState(0, 3));
        post.terms() = std::move(terms);
    }
    Eigen::VectorXcd target(8);
    target << 0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.5, -0.5;  // HHH+HHV+VVH-VVV
    return matches_pure(dv_logical_matrix(post, 3), target);
}

}  // namespace htqc::oracle
