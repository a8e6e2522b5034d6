#pragma once

// Independent transcription of the 30-phrase diagnosis table, shared by the
// unit tests and the acceptance runner.

#include "gls/taxonomy.hpp"

namespace gls::diagnosis_table {

struct Row {
  const char* phrase;
  DiseaseCategory category;
};

inline const Row kTable[] = {
    {"atelectasis", DiseaseCategory::Atelectasis},
    {"cardiomegaly", DiseaseCategory::Cardiomegaly},
    {"enlargement of the cardiac silhouette", DiseaseCategory::Cardiomegaly},
    {"hypertensive heart disease", DiseaseCategory::Cardiomegaly},
    {"lung opacity", DiseaseCategory::Consolidation},
    {"consolidation", DiseaseCategory::Consolidation},
    {"contusion", DiseaseCategory::Consolidation},
    {"hematoma", DiseaseCategory::Consolidation},
    {"edema", DiseaseCategory::Edema},
    {"vascular congestion", DiseaseCategory::Edema},
    {"heart failure", DiseaseCategory::Edema},
    {"hilar congestion", DiseaseCategory::Edema},
    {"hypoxemia", DiseaseCategory::Edema},
    {"pleural effusion", DiseaseCategory::Effusion},
    {"blunting of the costophrenic angle", DiseaseCategory::Effusion},
    {"emphysema", DiseaseCategory::Emphysema},
    {"fracture", DiseaseCategory::Fracture},
    {"hernia", DiseaseCategory::Hernia},
    {"gastric distention", DiseaseCategory::Hernia},
    {"tortuosity of the descending aorta", DiseaseCategory::Mass},
    {"thymoma", DiseaseCategory::Mass},
    {"tortuosity of the thoracic aorta", DiseaseCategory::Mass},
    {"calcification", DiseaseCategory::Nodule},
    {"granuloma", DiseaseCategory::Nodule},
    {"pleural thickening", DiseaseCategory::PleuralThickening},
    {"pneumonia", DiseaseCategory::Pneumonia},
    {"pneumothorax", DiseaseCategory::Pneumothorax},
    {"pneumomediastinum", DiseaseCategory::Pneumothorax},
    {"air collection", DiseaseCategory::Pneumothorax},
    {"scoliosis", DiseaseCategory::Scoliosis},
};


inline const char* const kOutOfVocabulary[] = {"common cold", "lung cancer", "asthma", "tuberculosis", "rib lesion"};

}  // namespace gls::diagnosis_table
