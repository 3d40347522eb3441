#pragma once

#include <stdexcept>
#include <string>

namespace corolla {

// Error taxonomy mirrored by the CLI exit codes:
//   argument/structure -> bad input (2), capability -> unsupported request (3),
//   precondition -> mathematical precondition violated (4).
enum class errkind { argument, capability, precondition, structure };

struct error : std::runtime_error {
    errkind kind;
    error(errkind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

[[noreturn]] inline void fail_argument(const std::string& msg) { throw error(errkind::argument, msg); }
[[noreturn]] inline void fail_capability(const std::string& msg) { throw error(errkind::capability, msg); }
[[noreturn]] inline void fail_precondition(const std::string& msg) { throw error(errkind::precondition, msg); }
[[noreturn]] inline void fail_structure(const std::string& msg) { throw error(errkind::structure, msg); }

}  // namespace corolla
