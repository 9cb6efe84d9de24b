"""camdiff: text- and keyframe-conditioned camera motion diffusion toolkit."""

from .camera import (
    CameraSample,
    CharacterFrame,
    CinematicLabels,
    SphericalPose,
    Trajectory,
    WorldCameraPose,
    classify_properties,
    local_to_spherical,
    resolve_world_pose,
    spherical_to_local,
)
from .conditioning import (
    ConditionBundle,
    FileEmbeddingProvider,
    HashProjectionEncoder,
    TextEmbedding,
    build_condition,
    embed_image_sequence,
    embed_text,
    interpolate_embeddings,
)
from .dataset import (
    DatasetConfig,
    PropertySpec,
    SequenceRecord,
    generate_dataset,
    load_dataset,
    pad_trajectory,
    sample_spec,
    synthesize,
)
from .model import CameraDenoiser, DenoiserConfig, SamplerConfig, TrainConfig
from .sampling import sample, sample_inpaint
from .schedule import NoiseSchedule, ddpm_step, make_linear_schedule, q_sample
from .training import ModelCheckpoint, train_diffusion

__version__ = "0.1.0"
