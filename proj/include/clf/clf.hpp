#pragma once

// Umbrella header; the advertised include for library consumers. The
// solvable normal-form backend lives in magnus.hpp, so groups.hpp alone
// cannot drive S_{r,d} oracles.

#include <clf/errors.hpp>
#include <clf/words.hpp>
#include <clf/solvable_nf.hpp>
#include <clf/groups.hpp>
#include <clf/json_io.hpp>
#include <clf/wreath.hpp>
#include <clf/fox.hpp>
#include <clf/magnus.hpp>
#include <clf/conjugacy.hpp>
#include <clf/clf_lab.hpp>
