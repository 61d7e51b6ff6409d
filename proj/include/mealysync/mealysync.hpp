#pragma once

#include "alphabet.hpp"
#include "classify.hpp"
#include "dfa.hpp"
#include "element.hpp"
#include "error.hpp"
#include "families.hpp"
#include "group.hpp"
#include "io.hpp"
#include "lang.hpp"
#include "mealy.hpp"
#include "partition.hpp"
#include "reset.hpp"
