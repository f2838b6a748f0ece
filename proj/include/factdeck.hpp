#pragma once

#include "factdeck/error.hpp"
#include "factdeck/util.hpp"
#include "factdeck/dataset.hpp"
#include "factdeck/chart_spec.hpp"
#include "factdeck/frame.hpp"
#include "factdeck/fact.hpp"
#include "factdeck/config.hpp"
#include "factdeck/detectors.hpp"
#include "factdeck/mining.hpp"
#include "factdeck/illustration.hpp"
#include "factdeck/ordering.hpp"
#include "factdeck/story.hpp"
#include "factdeck/story_document.hpp"
#include "factdeck/svg.hpp"
#include "factdeck/deck.hpp"
#include "factdeck/workbench.hpp"
#include "factdeck/session.hpp"
