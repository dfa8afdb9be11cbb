#pragma once

#include <stdexcept>
#include <string>

namespace rydgate {

enum class ErrorKind {
    domain,                // parameter outside its physical range
    config,                // malformed configuration or input file
    numerical_failure,     // quadrature / iteration did not converge
    singular_input,        // exact pole of a response function
    undefined_conditional, // conditioning on an event of zero probability
};

const char *to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(what), m_kind(kind) {}

    ErrorKind kind() const noexcept { return m_kind; }

private:
    ErrorKind m_kind;
};

class NumericalFailure : public Error {
public:
    NumericalFailure(const std::string &what, double achieved_error)
        : Error(ErrorKind::numerical_failure, what),
          m_achieved_error(achieved_error) {}

    double achieved_error() const noexcept { return m_achieved_error; }

private:
    double m_achieved_error;
};

[[noreturn]] inline void throw_domain(const std::string &what)
{
    throw Error(ErrorKind::domain, what);
}

} // namespace rydgate
