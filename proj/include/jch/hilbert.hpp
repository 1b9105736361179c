// hilbert.hpp — Atom⊗cavity product basis restricted to fixed total excitation number

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace jch {

enum class Boundary { open, periodic };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

struct LatticeSpec {
    int num_sites{1};
    Boundary boundary{Boundary::open};
    // Max photons per cavity. nullopt means "exact": each sector uses its own
    // total excitation number as the cutoff, so no matrix element is dropped.
    std::optional<int> photon_cutoff{};

    void validate() const;
    int cutoff_for(int total_excitations) const;

    // Nearest-neighbour bonds (k, k+1); the periodic chain adds (N-1, 0) when N > 2.
    std::vector<std::pair<int, int>> bonds() const;
};

struct SiteConfig {
    int photon_number{0};
    bool atom_excited{false};

    int excitations() const noexcept { return photon_number + (atom_excited ? 1 : 0); }
    // Position of this local state in the per-site ordering (photon_number, atom_excited).
    int local_index() const noexcept { return 2 * photon_number + (atom_excited ? 1 : 0); }

    friend bool operator==(const SiteConfig&, const SiteConfig&) = default;
};

// All configurations of an N-site chain carrying exactly `total_excitations`
// net excitations, in lexicographic order over sites (site 0 most significant),
// each site ordered by (photon_number, atom_excited). Immutable once built.
class BasisSector {
public:
    static BasisSector enumerate(const LatticeSpec& lattice, int total_excitations);

    const LatticeSpec& lattice() const noexcept { return lattice_; }
    int num_sites() const noexcept { return lattice_.num_sites; }
    int total_excitations() const noexcept { return total_; }
    int photon_cutoff() const noexcept { return cutoff_; }
    std::size_t dimension() const noexcept { return codes_.size(); }

    std::span<const SiteConfig> config(std::size_t index) const;
    SiteConfig local_occupation(std::size_t index, int site) const;

    std::optional<std::size_t> index_of(std::span<const SiteConfig> config) const;
    std::optional<std::size_t> index_of_code(std::uint64_t code) const;

    std::uint64_t code(std::size_t index) const { return codes_.at(index); }
    std::uint64_t pack(std::span<const SiteConfig> config) const;
    int bits_per_site() const noexcept { return bits_per_site_; }

private:
    BasisSector() = default;

    LatticeSpec lattice_{};
    int total_{0};
    int cutoff_{0};
    int bits_per_site_{1};
    std::vector<SiteConfig> configs_;  // row-major: dimension x num_sites
    std::vector<std::uint64_t> codes_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

using SectorPtr = std::shared_ptr<const BasisSector>;

SectorPtr make_sector(const LatticeSpec& lattice, int total_excitations);

// Sectors 0..max_total of one lattice. Used wherever dynamics moves between
// sectors (quantum jumps lower the excitation count).
class SectorFamily {
public:
    SectorFamily(LatticeSpec lattice, int max_total);

    const LatticeSpec& lattice() const noexcept { return lattice_; }
    int max_total() const noexcept { return max_total_; }
    SectorPtr sector(int total) const;

private:
    LatticeSpec lattice_;
    int max_total_;
    std::vector<SectorPtr> sectors_;
};

// Number of states in a sector computed by filtering the full product basis.
// Exponential; intended for cross-checks on tiny lattices.
std::size_t brute_force_dimension(const LatticeSpec& lattice, int total_excitations);

}  // namespace jch
