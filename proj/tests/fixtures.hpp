#pragma once

#include <clf/words.hpp>

// Regression constants produced by independent oracle runs. Each value
// records the command that regenerates it against the CLI.

namespace fixtures {

// min wreath-conjugator length for (lamp@0, step 1) vs (lamp@1, step 1):
// regen: clf conj-search "W:Z2~Z" '{"base":"1","lamps":[{"at":"0","val":"1"}]}'
//            '{"base":"1","lamps":[{"at":"1","val":"1"}]}' --cap 6
inline constexpr clf::Int kMinConjLampShift1 = 1;

// same for (lamp@0, step 1) vs (lamp@3, step 1): the pure translation
// (no lamps, cursor -3) is minimal together with (lamp@0, cursor -2):
// regen: clf conj-search "W:Z2~Z" '{"base":"1","lamps":[{"at":"0","val":"1"}]}'
//            '{"base":"1","lamps":[{"at":"3","val":"1"}]}' --cap 6
inline constexpr clf::Int kMinConjLampShift3 = 3;

// lamplighter ball sizes |B(r)|, r = 0..6, from the Cayley-graph BFS:
// regen: tests/acceptance C4 prints the sphere profile it enumerates
inline constexpr clf::Int kLamplighterBallSizes[7] = {1, 4, 10, 22, 44, 84, 155};

} // namespace fixtures
