#pragma once

// 30-case golden table for expression precedence/associativity, shared by the
// unit suite and the acceptance suite. Arguments are taken at exact grid
// points of an 8-point circle so trigonometric values are honest.

#include <complex>
#include <numbers>

namespace golden {

struct ExprCase {
    const char* text;
    double x1, x2;
    std::complex<double> expect;
};

inline const double GA = std::numbers::pi / 2;
inline const double GB = std::numbers::pi;

inline const ExprCase kCases[30] = {
    {"1+2*3", 0, 0, 7.0},
    {"2*3+1", 0, 0, 7.0},
    {"1-2-3", 0, 0, -4.0},
    {"12/3/2", 0, 0, 2.0},
    {"1-2*3", 0, 0, -5.0},
    {"2^3", 0, 0, 8.0},
    {"2^3^2", 0, 0, 512.0},
    {"-2^2", 0, 0, -4.0},
    {"(-2)^2", 0, 0, 4.0},
    {"2^-2", 0, 0, 0.25},
    {"-1-1", 0, 0, -2.0},
    {"--1", 0, 0, 1.0},
    {"2*-3", 0, 0, -6.0},
    {"i*i", 0, 0, -1.0},
    {"2+i*3", 0, 0, {2, 3}},
    {"(2+i)*(2-i)", 0, 0, 5.0},
    {"abs2(3+4*i)", 0, 0, 25.0},
    {"sqrt(4)", 0, 0, 2.0},
    {"exp(0)", 0, 0, 1.0},
    {"log(exp(1))", 0, 0, 1.0},
    {"sin(x1)", GA, 0, 1.0},
    {"cos(x1)", GB, 0, -1.0},
    {"sin(x1)^2 + cos(x1)^2", GA, 0, 1.0},
    {"2+sin(x1)", GA, 0, 3.0},
    {"sin(x1) + i*cos(x2)", GA, 0, {1, 1}},
    {"exp(i*x1)", GB, 0, {-1, 0}},
    {"x1*x2", GA, GB, GA * GB},
    {"x1 - x2/2", GB, GB, GB / 2},
    {"1/2*x1", GB, 0, GB / 2},
    {"3*x1^2", GA, 0, 3.0 * GA * GA},
};

} // namespace golden
