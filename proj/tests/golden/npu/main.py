# Inference loop for workpieces_conveyorbelt_mobilnet (2c430e9b-04d1-4c87-afb5-655431201ee1).
# Generated 2024-01-01T00:00:00.000Z for device device_npu_01.
import time

CLASS_LABELS = ["red_workpiece", "blue_workpiece", "white_workpiece"]
REJECT_LABEL = "reject"
CONFIDENCE_THRESHOLD = 0.6
PREPROCESS_SIZE = (96, 96)
INPUT_SHAPE = (1, 224, 224, 3)
OUTPUT_VARIABLE = "NPU_Results"
POLLING_INTERVAL_MS = 100


def preprocess(frame):
    return frame.resize(PREPROCESS_SIZE)


def classify(scores):
    best = max(range(len(scores)), key=lambda i: scores[i])
    if scores[best] < CONFIDENCE_THRESHOLD:
        return REJECT_LABEL, scores[best]
    return CLASS_LABELS[best], scores[best]


def run(npu, plc):
    while True:
        frame = npu.read_input()
        label, confidence = classify(npu.infer(preprocess(frame)))
        plc.write(OUTPUT_VARIABLE, {"classLabel": label, "confidence": confidence})
        time.sleep(POLLING_INTERVAL_MS / 1000.0)
