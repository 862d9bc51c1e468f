#pragma once

#include "kneading/letter.hpp"
#include "kneading/automaton.hpp"
#include "kneading/group.hpp"
#include "kneading/word_problem.hpp"
#include "kneading/wreath.hpp"
#include "kneading/schreier.hpp"
#include "kneading/ends.hpp"
#include "kneading/json_io.hpp"
#include "kneading/export.hpp"
#include "kneading/verify.hpp"
