#include "dtqc/error.hpp"

namespace dtqc {

const char *to_string(ErrorKind kind) noexcept {
    switch(kind) {
        case ErrorKind::size: return "size";
        case ErrorKind::partition: return "partition";
        case ErrorKind::naming: return "naming";
        case ErrorKind::consistency: return "consistency";
        case ErrorKind::sampling: return "sampling";
        case ErrorKind::windowing: return "windowing";
        case ErrorKind::numerical: return "numerical";
        case ErrorKind::validation: return "validation";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

} // namespace dtqc
