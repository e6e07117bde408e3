/*
 * Copyright 2026 The cubesplit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef CUBESPLIT_ERRORS_HPP
#define CUBESPLIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cubesplit {

/// Base class for all cubesplit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define CUBESPLIT_DEFINE_ERROR(Name)                                           \
    struct Name : Error {                                                      \
        using Error::Error;                                                    \
    }

// measures
CUBESPLIT_DEFINE_ERROR(ZeroTotalMass);
CUBESPLIT_DEFINE_ERROR(NegativeCell);
CUBESPLIT_DEFINE_ERROR(OutOfRange);
CUBESPLIT_DEFINE_ERROR(UnknownColor);

// divisions
CUBESPLIT_DEFINE_ERROR(IndexOutOfRange);
CUBESPLIT_DEFINE_ERROR(ShapeMismatch);
CUBESPLIT_DEFINE_ERROR(NotTwoColors);

// solver
CUBESPLIT_DEFINE_ERROR(BudgetMismatch);
CUBESPLIT_DEFINE_ERROR(SearchExhausted);
CUBESPLIT_DEFINE_ERROR(EmptyRegion);
CUBESPLIT_DEFINE_ERROR(NotDivisible);
CUBESPLIT_DEFINE_ERROR(TooLarge);

// polytope / rainbow
CUBESPLIT_DEFINE_ERROR(InvalidParameter);
CUBESPLIT_DEFINE_ERROR(NotPrime);
CUBESPLIT_DEFINE_ERROR(FixedCellFound);
CUBESPLIT_DEFINE_ERROR(Mismatch);

#undef CUBESPLIT_DEFINE_ERROR

} // namespace cubesplit

#endif
