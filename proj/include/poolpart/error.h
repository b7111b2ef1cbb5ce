/*
* Copyright (C) 2026 The poolpart authors
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
#ifndef POOLPART_ERROR_H
#define POOLPART_ERROR_H

#include <stdexcept>
#include <string>

namespace poolpart
{

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input: out-of-domain parameters, malformed records, broken invariants.
class ValidationError : public Error
{
public:
    using Error::Error;
};

class IoError : public Error
{
public:
    using Error::Error;
};

/// An optimization problem without a feasible solution.
class InfeasibleError : public Error
{
public:
    using Error::Error;
};

} // namespace poolpart

#endif // POOLPART_ERROR_H
