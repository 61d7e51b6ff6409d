#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace mealysync::detail {

  // Moore-style partition refinement of a complete deterministic structure
  // with n states over k letters. `next` is row-major (state * k + letter),
  // `initial` assigns every state its starting class. Returns the coarsest
  // stable refinement, blocks numbered by first occurrence.
  inline std::vector<std::uint32_t>
  refine_partition(std::size_t n, std::size_t k,
                   std::span<std::uint32_t const>    next,
                   std::vector<std::uint64_t> const& initial) {
    std::vector<std::uint32_t> block(n);
    std::size_t                count = 0;
    {
      std::map<std::uint64_t, std::uint32_t> renum;
      for (std::size_t q = 0; q < n; ++q) {
        auto it  = renum.emplace(initial[q], renum.size()).first;
        block[q] = it->second;
      }
      count = renum.size();
    }
    std::vector<std::uint32_t> sig(k + 1);
    while (true) {
      std::map<std::vector<std::uint32_t>, std::uint32_t> renum;
      std::vector<std::uint32_t>                          fresh(n);
      for (std::size_t q = 0; q < n; ++q) {
        sig[0] = block[q];
        for (std::size_t a = 0; a < k; ++a) {
          sig[a + 1] = block[next[q * k + a]];
        }
        auto it  = renum.emplace(sig, static_cast<std::uint32_t>(renum.size()))
                      .first;
        fresh[q] = it->second;
      }
      block.swap(fresh);
      if (renum.size() == count) {
        return block;
      }
      count = renum.size();
    }
  }

}  // namespace mealysync::detail
