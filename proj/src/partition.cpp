#include "cotype/partition.hpp"

#include "cotype/errors.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace cotype {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] < 1) throw DomainError("partition parts must be positive");
        if (i > 0 && parts_[i] > parts_[i - 1])
            throw NotWeaklyDecreasing("partition parts must be weakly decreasing");
    }
}

int Partition::size() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

std::string Partition::to_string() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i];
    os << ")";
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Partition& p) { return os << p.to_string(); }

Partition conjugate(const Partition& lambda) {
    std::vector<int> out(static_cast<std::size_t>(lambda.largest()));
    for (int i = 1; i <= lambda.largest(); ++i)
        out[static_cast<std::size_t>(i - 1)] = static_cast<int>(
            std::count_if(lambda.parts().begin(), lambda.parts().end(), [i](int x) { return x >= i; }));
    return Partition(std::move(out));
}

Partition partition_from_exponents(const std::vector<int>& exponents) {
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        if (exponents[i] < 0) throw DomainError("exponents must be nonnegative");
        if (i > 0 && exponents[i] > exponents[i - 1])
            throw NotWeaklyDecreasing("exponent tuple must be weakly decreasing");
    }
    std::vector<int> parts;
    for (int e : exponents)
        if (e > 0) parts.push_back(e);
    return Partition(std::move(parts));
}

namespace {

void box_rec(int parts_left, int cap, std::vector<int>& cur, std::vector<Partition>& out) {
    out.emplace_back(cur);
    if (parts_left == 0) return;
    for (int v = 1; v <= cap; ++v) {
        cur.push_back(v);
        box_rec(parts_left - 1, v, cur, out);
        cur.pop_back();
    }
}

void sum_rec(int remaining, int parts_left, int cap, std::vector<int>& cur, std::vector<Partition>& out) {
    if (remaining == 0) {
        out.emplace_back(cur);
        return;
    }
    if (parts_left == 0) return;
    for (int v = std::min(cap, remaining); v >= 1; --v) {
        cur.push_back(v);
        sum_rec(remaining - v, parts_left - 1, v, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<Partition> partitions_in_box(int max_parts, int max_part) {
    std::vector<Partition> out;
    std::vector<int> cur;
    box_rec(max_parts, max_part, cur, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Partition> partitions_of(int n, int max_parts) {
    if (n < 0) throw DomainError("partitions_of requires n >= 0");
    std::vector<Partition> out;
    std::vector<int> cur;
    sum_rec(n, max_parts, n, cur, out);
    return out;
}

}  // namespace cotype
