#pragma once

// Inline fan fixtures shared by the test binaries; the JSON files under
// fixtures/ describe the same fans for the CLI.

#include "coverforge/fan.hpp"

namespace coverforge::fixtures {

inline Fan p1() {
    return make_fan(1, {{Int(1)}, {Int(-1)}}, {{0}, {1}}, true);
}

inline Fan p2() {
    return make_fan(2, {{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(-1), Int(-1)}},
                    {{0, 1}, {1, 2}, {2, 0}}, true);
}

inline Fan p1xp1() {
    return make_fan(2,
                    {{Int(1), Int(0)}, {Int(-1), Int(0)}, {Int(0), Int(1)},
                     {Int(0), Int(-1)}},
                    {{0, 2}, {1, 2}, {1, 3}, {0, 3}}, true);
}

inline Fan hirzebruch1() {
    return make_fan(2,
                    {{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(-1), Int(1)},
                     {Int(0), Int(-1)}},
                    {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, true);
}

inline Fan square_torsion() {
    return make_fan(2,
                    {{Int(1), Int(1)}, {Int(-1), Int(1)}, {Int(-1), Int(-1)},
                     {Int(1), Int(-1)}},
                    {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, true);
}

} // namespace coverforge::fixtures
