#pragma once

namespace stemnoise::detail {

// Mirror (reflect-without-repeat) index: ... 2 1 | 0 1 2 ... n-1 | n-2 n-3 ...
// Handles windows wider than the image by repeated folding.
inline int reflect_index(int i, int n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * n - 2 - i;
    }
    return i;
}

} // namespace stemnoise::detail
