#include "cellforce/error.hpp"

namespace cellforce {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Config: return "configuration error";
        case ErrorKind::Geometry: return "geometry error";
        case ErrorKind::Location: return "location error";
        case ErrorKind::Assembly: return "assembly error";
        case ErrorKind::Solver: return "solver error";
        case ErrorKind::SpdViolation: return "SPD violation";
        case ErrorKind::Domain: return "domain error";
        case ErrorKind::Io: return "I/O error";
    }
    return "error";
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace cellforce
