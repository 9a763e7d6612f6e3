#pragma once
#include <stdexcept>
#include <string>

namespace qbounce {

// Base for all toolkit errors. exit_code() is what the CLI returns:
//   2 config/validation, 3 numerical, 4 capacity.
class QbError : public std::runtime_error {
public:
    QbError(const std::string& msg, int code) : std::runtime_error(msg), code_(code) {}
    int exit_code() const { return code_; }
private:
    int code_;
};

class ConfigError : public QbError {
public:
    explicit ConfigError(const std::string& msg) : QbError(msg, 2) {}
};

class CapacityError : public QbError {
public:
    explicit CapacityError(const std::string& msg) : QbError(msg, 4) {}
};

class NumericalError : public QbError {
public:
    explicit NumericalError(const std::string& msg) : QbError(msg, 3) {}
};

class DomainError : public NumericalError {
public:
    explicit DomainError(const std::string& msg) : NumericalError(msg) {}
};

class RangeError : public NumericalError {
public:
    explicit RangeError(const std::string& msg) : NumericalError(msg) {}
};

class ConvergenceError : public NumericalError {
public:
    explicit ConvergenceError(const std::string& msg) : NumericalError(msg) {}
};

class LeakageError : public NumericalError {
public:
    explicit LeakageError(const std::string& msg) : NumericalError(msg) {}
};

class StepSizeError : public NumericalError {
public:
    explicit StepSizeError(const std::string& msg) : NumericalError(msg) {}
};

class WindowError : public NumericalError {
public:
    explicit WindowError(const std::string& msg) : NumericalError(msg) {}
};

} // namespace qbounce
