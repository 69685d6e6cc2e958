#include "cbmspares/state_space.hpp"

#include <limits>
#include <string>

namespace cbmspares {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > kSaturated / b) return kSaturated;
    return a * b;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > kSaturated) return kSaturated;
    }
    return static_cast<std::uint64_t>(r);
}

// All non-negative integer vectors of the given length summing to total, in
// lexicographic order.
void compositions(int length, int total, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
    if (length == 1) {
        prefix.push_back(total);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int first = 0; first <= total; ++first) {
        prefix.push_back(first);
        compositions(length - 1, total - first, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

std::uint64_t StateSpace::count(int I, int J, int K, int N) {
    std::uint64_t c = binomial(static_cast<std::uint64_t>(K + 2 * I - 1), static_cast<std::uint64_t>(2 * I - 1));
    for (int m = 0; m < J; ++m) c = mul_sat(c, static_cast<std::uint64_t>(N + 1));
    return mul_sat(c, static_cast<std::uint64_t>(J + 1));
}

StateSpace::StateSpace(const ModelParams& params, std::uint64_t max_states)
    : I_(params.I()), J_(params.J()), K_(params.K), N_(params.N()) {
    if (I_ < 1 || J_ < 1 || K_ < 0 || N_ < 1) throw std::invalid_argument("state space: invalid dimensions");

    const std::uint64_t total = count(I_, J_, K_, N_);
    if (total > max_states)
        throw StateSpaceTooLarge("state space has " +
                                 (total == kSaturated ? std::string("more than 2^64") : std::to_string(total)) +
                                 " states, above the limit of " + std::to_string(max_states));

    std::vector<int> prefix;
    compositions(2 * I_, K_, prefix, compositions_);
    for (std::size_t k = 0; k < compositions_.size(); ++k) composition_rank_.emplace(compositions_[k], k);

    conditions_ = 1;
    for (int m = 0; m < J_; ++m) conditions_ *= static_cast<std::size_t>(N_ + 1);
    size_ = compositions_.size() * conditions_ * static_cast<std::size_t>(J_ + 1);
}

SystemState StateSpace::state_of(std::size_t index) const {
    if (index >= size_)
        throw std::out_of_range("state index " + std::to_string(index) + " outside [0, " + std::to_string(size_) + ")");

    SystemState s;
    s.j = static_cast<int>(index % static_cast<std::size_t>(J_ + 1));
    index /= static_cast<std::size_t>(J_ + 1);

    std::size_t cond = index % conditions_;
    s.C.assign(static_cast<std::size_t>(J_), 0);
    for (int m = J_ - 1; m >= 0; --m) {
        s.C[static_cast<std::size_t>(m)] = static_cast<int>(cond % static_cast<std::size_t>(N_ + 1));
        cond /= static_cast<std::size_t>(N_ + 1);
    }

    const auto& fp = compositions_[index / conditions_];
    s.F.assign(fp.begin(), fp.begin() + I_);
    s.P.assign(fp.begin() + I_, fp.end());
    return s;
}

std::optional<std::size_t> StateSpace::find(const SystemState& s) const {
    if (s.F.size() != static_cast<std::size_t>(I_) || s.P.size() != static_cast<std::size_t>(I_) ||
        s.C.size() != static_cast<std::size_t>(J_) || s.j < 0 || s.j > J_)
        return std::nullopt;

    std::vector<int> fp(s.F);
    fp.insert(fp.end(), s.P.begin(), s.P.end());
    const auto it = composition_rank_.find(fp);
    if (it == composition_rank_.end()) return std::nullopt;

    std::size_t cond = 0;
    for (int c : s.C) {
        if (c < 0 || c > N_) return std::nullopt;
        cond = cond * static_cast<std::size_t>(N_ + 1) + static_cast<std::size_t>(c);
    }
    return (it->second * conditions_ + cond) * static_cast<std::size_t>(J_ + 1) + static_cast<std::size_t>(s.j);
}

std::size_t StateSpace::index_of(const SystemState& s) const {
    if (auto idx = find(s)) return *idx;
    throw std::invalid_argument("state " + to_string(s) + " is not in the state space");
}

SystemState StateSpace::canonical_state() const {
    SystemState s;
    s.F.assign(static_cast<std::size_t>(I_), K_ / I_);
    for (int i = 0; i < K_ % I_; ++i) ++s.F[static_cast<std::size_t>(i)];
    s.P.assign(static_cast<std::size_t>(I_), 0);
    s.C.assign(static_cast<std::size_t>(J_), N_);
    s.j = 0;
    return s;
}

}  // namespace cbmspares
