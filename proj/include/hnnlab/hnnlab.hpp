#pragma once

#include "hnnlab/bigint.hpp"
#include "hnnlab/cli.hpp"
#include "hnnlab/config.hpp"
#include "hnnlab/conjugacy.hpp"
#include "hnnlab/group.hpp"
#include "hnnlab/intlin.hpp"
#include "hnnlab/normalform.hpp"
#include "hnnlab/presentation.hpp"
#include "hnnlab/rng.hpp"
#include "hnnlab/schreier.hpp"
#include "hnnlab/syllable.hpp"
#include "hnnlab/words.hpp"
