#pragma once

// Built-in copies of data/default_lexicon.tsv and data/default_taxonomy.tsv.
// Keep in sync with the data files; test_lexicon checks byte equality.

#include <string_view>

#include "gls/lexicon.hpp"
#include "gls/taxonomy.hpp"

namespace gls {

inline constexpr std::string_view kDefaultLexiconTsv = R"tsv(
# Default uncertainty lexicon: pattern<TAB>score<TAB>kind
# A disease mention with no cue in its sentence scores +3.
likely	2	uncertainty_cue
probable	2	uncertainty_cue
probably	2	uncertainty_cue
possible	1	uncertainty_cue
possibly	1	uncertainty_cue
may represent	1	uncertainty_cue
suspected	1	uncertainty_cue
suspicious for	1	uncertainty_cue
cannot be excluded	0	uncertainty_cue
not excluded	0	uncertainty_cue
cannot exclude	0	uncertainty_cue
versus	0	uncertainty_cue
equivocal	0	uncertainty_cue
maybe	0	uncertainty_cue
unlikely	-1	uncertainty_cue
doubtful	-1	uncertainty_cue
less likely	-1	uncertainty_cue
no definite	-2	negation_cue
without definite	-2	negation_cue
no convincing	-2	negation_cue
no	-3	negation_cue
not	-3	negation_cue
without	-3	negation_cue
negative for	-3	negation_cue
free of	-3	negation_cue
clear of	-3	negation_cue
resolved	-3	negation_cue
)tsv";

inline constexpr std::string_view kDefaultTaxonomyTsv = R"tsv(
# Raw diagnosis phrase<TAB>clinical category (14 canonical names)
atelectasis	Atelectasis
cardiomegaly	Cardiomegaly
enlargement of the cardiac silhouette	Cardiomegaly
hypertensive heart disease	Cardiomegaly
lung opacity	Consolidation
consolidation	Consolidation
contusion	Consolidation
hematoma	Consolidation
edema	Edema
vascular congestion	Edema
heart failure	Edema
hilar congestion	Edema
hypoxemia	Edema
pleural effusion	Effusion
blunting of the costophrenic angle	Effusion
emphysema	Emphysema
fracture	Fracture
hernia	Hernia
gastric distention	Hernia
tortuosity of the descending aorta	Mass
thymoma	Mass
tortuosity of the thoracic aorta	Mass
calcification	Nodule
granuloma	Nodule
pleural thickening	PleuralThickening
pneumonia	Pneumonia
pneumothorax	Pneumothorax
pneumomediastinum	Pneumothorax
air collection	Pneumothorax
scoliosis	Scoliosis
)tsv";

namespace detail {
// Raw strings above start with a newline after the delimiter.
constexpr std::string_view drop_leading_newline(std::string_view s) { return s.substr(1); }
}  // namespace detail

inline std::string_view default_lexicon_tsv() { return detail::drop_leading_newline(kDefaultLexiconTsv); }
inline std::string_view default_taxonomy_tsv() { return detail::drop_leading_newline(kDefaultTaxonomyTsv); }

inline const Lexicon& default_lexicon() {
  static const Lexicon lexicon = load_lexicon(default_lexicon_tsv());
  return lexicon;
}

inline const TaxonomyMap& default_taxonomy() {
  static const TaxonomyMap taxonomy = load_taxonomy(default_taxonomy_tsv());
  return taxonomy;
}

}  // namespace gls
