#pragma once

// LAPACKE with std::complex as the complex type. Include this header before
// any other translation-unit include of <lapacke.h> or <lapack.h>.

#include <complex>

#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#ifndef LAPACK_COMPLEX_CPP
#define LAPACK_COMPLEX_CPP
#endif
#include <lapacke.h>
