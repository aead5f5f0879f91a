#pragma once

// Umbrella header for the numerical library (the CLI lives in qik/cli.hpp).

#include "qik/conjugation.hpp"
#include "qik/constructions.hpp"
#include "qik/defects.hpp"
#include "qik/errors.hpp"
#include "qik/exact.hpp"
#include "qik/gaussian.hpp"
#include "qik/linalg.hpp"
#include "qik/matrix.hpp"
#include "qik/random.hpp"
#include "qik/report.hpp"
#include "qik/sequences.hpp"
#include "qik/structure.hpp"
#include "qik/suites.hpp"
#include "qik/tolerance.hpp"
#include "qik/version.hpp"
