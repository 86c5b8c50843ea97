#pragma once

#include <algorithm>
#include <cstdio>
#include <exception>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace stepprop::tools {

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v;
    if (n == 1) return {a};
    for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
    return v;
}

// Comma-separated rows, '.' decimal, 17 significant digits.
class Csv {
public:
    explicit Csv(const std::vector<std::string>& header) {
        for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
        os_ << '\n';
    }
    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << fmt(values[i]);
        os_ << '\n';
    }
    void cells(const std::vector<std::string>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << values[i];
        os_ << '\n';
    }
    static std::string fmt(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }
    std::string str() const { return os_.str(); }

private:
    std::ostringstream os_;
};

// f(i) for i in [0, n) on `threads` workers; results in index order.
template <class T, class F>
std::vector<T> parallel_map(int n, int threads, F f) {
    std::vector<T> out(static_cast<std::size_t>(n));
    const int nt = std::max(1, std::min(threads, n));
    std::vector<std::exception_ptr> errs(nt);
    auto work = [&](int t) {
        try {
            for (int i = t; i < n; i += nt) out[i] = f(i);
        } catch (...) {
            errs[t] = std::current_exception();
        }
    };
    if (nt == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace stepprop::tools
