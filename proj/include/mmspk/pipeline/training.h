// Copyright (c) 2026 The mmspk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MMSPK_PIPELINE_TRAINING_H_
#define MMSPK_PIPELINE_TRAINING_H_

#include <vector>

#include "mmspk/encoders/teacher.h"
#include "mmspk/pipeline/bundle.h"
#include "mmspk/pipeline/train_config.h"
#include "mmspk/synthdata/corpus.h"

namespace mmspk {

// Encoder trained alone with the margin classifier on the training split.
struct ClassifierPretrainResult {
  MlpEncoder encoder;
  ClassifierWeights classifier;
  std::vector<TrainLogEntry> log;
};

// Stage 0. The speech encoder is frozen afterwards and also serves as the
// speech teacher; the face teacher is trained the same way on faces.
// Throw TrainingError on a non-finite loss.
ClassifierPretrainResult PretrainSpeechEncoder(const Corpus &corpus,
                                               const TrainConfig &cfg);
ClassifierPretrainResult PretrainFaceTeacher(const Corpus &corpus,
                                             const TrainConfig &cfg);

struct FaceStageResult {
  MlpEncoder face;
  ClassifierWeights classifier;
  std::vector<TrainLogEntry> log;
};

// Teacher copy with an identity head; the stage-1 starting point.
MlpEncoder InitialFaceStudent(const TeacherEncoder &face_teacher);

// Stage 1. `classifier` is the starting W (the speech pretraining
// classifier). Only the face encoder and W are updated.
FaceStageResult TrainFaceEncoder(const Corpus &corpus,
                                 const TeacherEncoder &speech,
                                 const TeacherEncoder &face_teacher,
                                 const ClassifierWeights &classifier,
                                 const TrainConfig &cfg);

struct TextStageResult {
  TextEncoder text;
  std::vector<TrainLogEntry> log;
};

// Random text encoder that stage 2 starts from for this config.
TextEncoder InitialTextEncoder(const TrainConfig &cfg);

// Stage 2. Speech and face encoders are frozen.
TextStageResult TrainTextEncoder(const Corpus &corpus,
                                 const TeacherEncoder &speech,
                                 const TeacherEncoder &face,
                                 const TrainConfig &cfg);

// Text-alignment loss over the held-out split: for every held-out speaker
// one prompt paired with a speech observation and one with a face
// observation.
double TextValidationLoss(const Corpus &corpus, const MlpEncoder &speech,
                          const MlpEncoder &face, const TextEncoder &text,
                          const LossConfig &loss);

// Runs one stage on `bundle`, appending to `log`. Throws StateError when
// the previous stage's outputs are missing.
void RunStage(int stage, const Corpus &corpus, const TrainConfig &cfg,
              ModelBundle *bundle, std::vector<TrainLogEntry> *log);

}  // namespace mmspk

#endif  // MMSPK_PIPELINE_TRAINING_H_
