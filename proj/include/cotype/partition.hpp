#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cotype {

/// Weakly decreasing positive parts λ₁ ≥ λ₂ ≥ … ≥ λ_r.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<int> parts);

    const std::vector<int>& parts() const { return parts_; }
    int rank() const { return static_cast<int>(parts_.size()); }
    int size() const;
    bool empty() const { return parts_.empty(); }
    // λ_i with 1-based i; zero past the last part.
    int part(int i) const { return i >= 1 && i <= rank() ? parts_[static_cast<std::size_t>(i - 1)] : 0; }
    int largest() const { return parts_.empty() ? 0 : parts_.front(); }

    std::string to_string() const;

    friend bool operator==(const Partition&, const Partition&) = default;
    friend auto operator<=>(const Partition&, const Partition&) = default;

private:
    std::vector<int> parts_;
};

/// λ′ with λ′_i = #{j : λ_j ≥ i}.
Partition conjugate(const Partition& lambda);

/// Builds a partition from a weakly decreasing tuple that may contain
/// trailing zeros (an exponent tuple); throws NotWeaklyDecreasing otherwise.
Partition partition_from_exponents(const std::vector<int>& exponents);

/// All partitions with at most max_parts parts, each at most max_part.
std::vector<Partition> partitions_in_box(int max_parts, int max_part);
/// All partitions of n with at most max_parts parts.
std::vector<Partition> partitions_of(int n, int max_parts);

std::ostream& operator<<(std::ostream& os, const Partition& p);

}  // namespace cotype
