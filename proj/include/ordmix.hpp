#pragma once

#include "ordmix/baseline.hpp"
#include "ordmix/bivariate.hpp"
#include "ordmix/config.hpp"
#include "ordmix/copula.hpp"
#include "ordmix/errors.hpp"
#include "ordmix/named.hpp"
#include "ordmix/orders.hpp"
#include "ordmix/quadrature.hpp"
#include "ordmix/random.hpp"
#include "ordmix/spec_parse.hpp"
#include "ordmix/transform.hpp"
#include "ordmix/verify.hpp"
