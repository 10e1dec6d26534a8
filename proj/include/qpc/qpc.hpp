#pragma once

#include "qpc/base.hpp"
#include "qpc/collect.hpp"
#include "qpc/covers.hpp"
#include "qpc/intmat.hpp"
#include "qpc/oracle.hpp"
#include "qpc/parse.hpp"
#include "qpc/presentation.hpp"
#include "qpc/qnu.hpp"
#include "qpc/qwedge.hpp"
#include "qpc/structure.hpp"
#include "qpc/subgrp.hpp"
