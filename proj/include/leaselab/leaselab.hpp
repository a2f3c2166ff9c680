#pragma once

#include "leaselab/error.hpp"
#include "leaselab/lease_model.hpp"
#include "leaselab/graph.hpp"
#include "leaselab/parking_permit.hpp"
#include "leaselab/metric_embedding.hpp"
#include "leaselab/steiner_leasing.hpp"
#include "leaselab/instance.hpp"
#include "leaselab/oracle.hpp"
#include "leaselab/ocdsl.hpp"
#include "leaselab/odsl_primal_dual.hpp"
#include "leaselab/generators.hpp"
#include "leaselab/experiment.hpp"
