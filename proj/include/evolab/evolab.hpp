#pragma once

#include "evolab/core/angles.hpp"
#include "evolab/core/integrate.hpp"
#include "evolab/core/landscape.hpp"
#include "evolab/core/rng.hpp"
#include "evolab/cpg/morphology.hpp"
#include "evolab/cpg/network.hpp"
#include "evolab/ctrl/regulatory.hpp"
#include "evolab/ctrl/reservoir.hpp"
#include "evolab/exp/archive.hpp"
#include "evolab/exp/config.hpp"
#include "evolab/exp/experiments.hpp"
#include "evolab/exp/io.hpp"
#include "evolab/exp/parallel.hpp"
#include "evolab/exp/report.hpp"
#include "evolab/metrics/learning.hpp"
#include "evolab/metrics/skills.hpp"
#include "evolab/metrics/swarm.hpp"
#include "evolab/opt/cmaes.hpp"
#include "evolab/opt/common.hpp"
#include "evolab/opt/de.hpp"
#include "evolab/opt/iso.hpp"
#include "evolab/opt/revde.hpp"
#include "evolab/sim/drive.hpp"
#include "evolab/sim/field.hpp"
#include "evolab/sim/trial.hpp"
#include "evolab/sim/world.hpp"
