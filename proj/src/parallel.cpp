#include "gaussdens/parallel.hpp"

#include <cstdlib>
#include <string>

namespace gaussdens {

int worker_count() {
    static const int count = [] {
        int n = static_cast<int>(std::thread::hardware_concurrency());
        if (n <= 0) n = 1;
        if (const char* env = std::getenv("GAUSSDENS_THREADS")) {
            try {
                const int cap = std::stoi(env);
                if (cap >= 1) n = std::min(n, cap);
            } catch (...) {
                // ignore malformed values, keep the hardware default
            }
        }
        return n;
    }();
    return count;
}

}  // namespace gaussdens
