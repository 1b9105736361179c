// hilbert.cpp — Sector enumeration and packed-code indexing

#include "jch/hilbert.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace jch {

std::string to_string(Boundary b) {
    return b == Boundary::open ? "open" : "periodic";
}

Boundary boundary_from_string(const std::string& s) {
    if (s == "open") return Boundary::open;
    if (s == "periodic") return Boundary::periodic;
    throw std::invalid_argument("unknown boundary '" + s + "' (expected open|periodic)");
}

void LatticeSpec::validate() const {
    if (num_sites < 1) throw std::invalid_argument("LatticeSpec: num_sites must be >= 1");
    if (photon_cutoff && *photon_cutoff < 0)
        throw std::invalid_argument("LatticeSpec: photon_cutoff must be >= 0");
}

int LatticeSpec::cutoff_for(int total_excitations) const {
    return photon_cutoff ? *photon_cutoff : total_excitations;
}

std::vector<std::pair<int, int>> LatticeSpec::bonds() const {
    std::vector<std::pair<int, int>> out;
    for (int k = 0; k + 1 < num_sites; ++k) out.emplace_back(k, k + 1);
    if (boundary == Boundary::periodic && num_sites > 2) out.emplace_back(num_sites - 1, 0);
    return out;
}

namespace {

void enumerate_rec(int site, int remaining, int cutoff, std::vector<SiteConfig>& current,
                   std::vector<SiteConfig>& out) {
    const int n_sites = static_cast<int>(current.size());
    if (site == n_sites) {
        if (remaining == 0) out.insert(out.end(), current.begin(), current.end());
        return;
    }
    // Remaining sites can absorb at most (cutoff + 1) each.
    const long long capacity = static_cast<long long>(n_sites - site) * (cutoff + 1);
    if (remaining > capacity) return;
    for (int n = 0; n <= cutoff; ++n) {
        for (int e = 0; e <= 1; ++e) {
            const int local = n + e;
            if (local > remaining) return;
            current[site] = SiteConfig{n, e == 1};
            enumerate_rec(site + 1, remaining - local, cutoff, current, out);
        }
    }
}

}  // namespace

BasisSector BasisSector::enumerate(const LatticeSpec& lattice, int total_excitations) {
    lattice.validate();
    if (total_excitations < 0)
        throw std::invalid_argument("enumerate_sector: total_excitations must be >= 0");
    const int cutoff = lattice.cutoff_for(total_excitations);
    const long long reachable = static_cast<long long>(lattice.num_sites) * (cutoff + 1);
    if (total_excitations > reachable)
        throw std::invalid_argument("enumerate_sector: total_excitations " +
                                    std::to_string(total_excitations) +
                                    " unreachable with photon cutoff " + std::to_string(cutoff));

    BasisSector s;
    s.lattice_ = lattice;
    s.total_ = total_excitations;
    s.cutoff_ = cutoff;
    const auto local_states = static_cast<unsigned>(2 * (cutoff + 1));
    s.bits_per_site_ = std::max(1, static_cast<int>(std::bit_width(local_states - 1)));
    if (s.bits_per_site_ * lattice.num_sites > 64)
        throw std::invalid_argument("enumerate_sector: configuration does not fit a 64-bit code");

    std::vector<SiteConfig> current(static_cast<std::size_t>(lattice.num_sites));
    enumerate_rec(0, total_excitations, cutoff, current, s.configs_);

    const std::size_t dim = s.configs_.size() / static_cast<std::size_t>(lattice.num_sites);
    s.codes_.reserve(dim);
    s.index_.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const auto n = static_cast<std::size_t>(lattice.num_sites);
        const auto c = s.pack(std::span<const SiteConfig>(s.configs_.data() + i * n, n));
        s.codes_.push_back(c);
        s.index_.emplace(c, i);
    }
    return s;
}

std::span<const SiteConfig> BasisSector::config(std::size_t index) const {
    if (index >= dimension()) throw std::out_of_range("BasisSector: config index out of range");
    const auto n = static_cast<std::size_t>(lattice_.num_sites);
    return {configs_.data() + index * n, n};
}

SiteConfig BasisSector::local_occupation(std::size_t index, int site) const {
    if (site < 0 || site >= lattice_.num_sites)
        throw std::out_of_range("BasisSector: site out of range");
    return config(index)[static_cast<std::size_t>(site)];
}

std::uint64_t BasisSector::pack(std::span<const SiteConfig> config) const {
    std::uint64_t code = 0;
    for (const auto& sc : config) {
        code = (code << bits_per_site_) | static_cast<std::uint64_t>(sc.local_index());
    }
    return code;
}

std::optional<std::size_t> BasisSector::index_of(std::span<const SiteConfig> config) const {
    if (static_cast<int>(config.size()) != lattice_.num_sites) return std::nullopt;
    int total = 0;
    for (const auto& sc : config) {
        if (sc.photon_number < 0 || sc.photon_number > cutoff_) return std::nullopt;
        total += sc.excitations();
    }
    if (total != total_) return std::nullopt;
    return index_of_code(pack(config));
}

std::optional<std::size_t> BasisSector::index_of_code(std::uint64_t code) const {
    const auto it = index_.find(code);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

SectorPtr make_sector(const LatticeSpec& lattice, int total_excitations) {
    return std::make_shared<const BasisSector>(BasisSector::enumerate(lattice, total_excitations));
}

SectorFamily::SectorFamily(LatticeSpec lattice, int max_total)
    : lattice_(std::move(lattice)), max_total_(max_total) {
    if (max_total < 0) throw std::invalid_argument("SectorFamily: max_total must be >= 0");
    sectors_.reserve(static_cast<std::size_t>(max_total) + 1);
    for (int m = 0; m <= max_total; ++m) sectors_.push_back(make_sector(lattice_, m));
}

SectorPtr SectorFamily::sector(int total) const {
    if (total < 0 || total > max_total_)
        throw std::out_of_range("SectorFamily: total " + std::to_string(total) + " not in family");
    return sectors_[static_cast<std::size_t>(total)];
}

std::size_t brute_force_dimension(const LatticeSpec& lattice, int total_excitations) {
    lattice.validate();
    const int cutoff = lattice.cutoff_for(total_excitations);
    const int local = 2 * (cutoff + 1);
    std::size_t full = 1;
    for (int k = 0; k < lattice.num_sites; ++k) full *= static_cast<std::size_t>(local);
    std::size_t count = 0;
    for (std::size_t s = 0; s < full; ++s) {
        std::size_t rest = s;
        int total = 0;
        for (int k = 0; k < lattice.num_sites; ++k) {
            const int li = static_cast<int>(rest % static_cast<std::size_t>(local));
            rest /= static_cast<std::size_t>(local);
            total += li / 2 + li % 2;
        }
        if (total == total_excitations) ++count;
    }
    return count;
}

}  // namespace jch
