#pragma once

#include "boxology/catalog.hpp"
#include "boxology/classifier.hpp"
#include "boxology/composer.hpp"
#include "boxology/diagnostic.hpp"
#include "boxology/dsl.hpp"
#include "boxology/graph.hpp"
#include "boxology/matcher.hpp"
#include "boxology/render.hpp"
#include "boxology/rules.hpp"
#include "boxology/taxonomy.hpp"
