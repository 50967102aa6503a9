#include "nullcorr/monomial.hpp"

#include <stdexcept>

namespace nullcorr {

namespace {

void enumerate(int nv, int deg, Expo& cur, int pos, std::vector<Expo>& out) {
    if (pos == nv - 1) {
        cur[static_cast<size_t>(pos)] = deg;
        out.push_back(cur);
        return;
    }
    for (int e = deg; e >= 0; --e) {
        cur[static_cast<size_t>(pos)] = e;
        enumerate(nv, deg - e, cur, pos + 1, out);
    }
    cur[static_cast<size_t>(pos)] = 0;
}

}  // namespace

MonomialBasis::MonomialBasis(int num_vars, int degree) : nv_(num_vars), deg_(degree) {
    if (num_vars < 1) throw std::invalid_argument("MonomialBasis: num_vars >= 1");
    if (degree >= 0) {
        Expo cur(static_cast<size_t>(num_vars), 0);
        enumerate(num_vars, degree, cur, 0, list_);
    }
    for (size_t i = 0; i < list_.size(); ++i) index_[list_[i]] = static_cast<int>(i);
}

int MonomialBasis::index_of(const Expo& e) const {
    auto it = index_.find(e);
    return it == index_.end() ? -1 : it->second;
}

const MonomialBasis& MonomialBasis::get(int num_vars, int degree) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<MonomialBasis>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(num_vars, degree);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<MonomialBasis>(num_vars, degree)).first;
    return *it->second;
}

}  // namespace nullcorr
