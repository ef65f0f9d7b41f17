#pragma once

#include "lidforge/classifier.hpp"
#include "lidforge/contamination.hpp"
#include "lidforge/corpus.hpp"
#include "lidforge/embedder.hpp"
#include "lidforge/errors.hpp"
#include "lidforge/eval.hpp"
#include "lidforge/features.hpp"
#include "lidforge/hashing.hpp"
#include "lidforge/hierarchy.hpp"
#include "lidforge/langmeta.hpp"
#include "lidforge/manifest.hpp"
#include "lidforge/serialize.hpp"
#include "lidforge/unicode.hpp"
#include "lidforge/version.hpp"
