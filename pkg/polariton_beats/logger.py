import tensorflow as tf
import numpy as np


class Logger(object):

    def __init__(self,
                 logging_dir):
        """Creates a logging interface to a tensorboard file for
        visualizing traces and fits in the tensorboard web interface;
        note that mean, max, min, and std are recorded for arrays

        Arguments:

        logging_dir: str
            the path on the disk to save records to
        """

        tf.io.gfile.makedirs(logging_dir)
        self.writer = tf.summary.create_file_writer(logging_dir)

    def record(self,
               key,
               value,
               step,
               percentile=False):
        """Log statistics about a value to tensorboard log files for
        visualization later

        Arguments:

        key: str
            the string name to use when logging data in tensorboard
            that determines groupings in the web interface
        value: float or np.ndarray
            the value to record statistics about
        step: int
            the sample index or sweep point the value belongs to
        percentile: bool
            record the 100th, 90th, 80th and 50th percentiles of an array
            instead of its max, mean, min and std
        """

        value = np.asarray(value, dtype=np.float64)
        step = tf.cast(tf.convert_to_tensor(step), tf.int64)
        with self.writer.as_default():

            if value.size == 1:

                # log one statistic of the incoming values
                tf.summary.scalar(key, float(value.reshape([])), step=step)

            elif percentile:

                # log several statistics of the incoming values
                for q in (100.0, 90.0, 80.0, 50.0):
                    tf.summary.scalar(key + f'/{q:.0f}th',
                                      float(np.percentile(value, q)),
                                      step=step)

            else:

                # log several statistics of the incoming values
                tf.summary.scalar(key + '/max', float(np.max(value)),
                                  step=step)
                tf.summary.scalar(key + '/mean', float(np.mean(value)),
                                  step=step)
                tf.summary.scalar(key + '/min', float(np.min(value)),
                                  step=step)
                tf.summary.scalar(key + '/std', float(np.std(value)),
                                  step=step)

    def record_trace(self,
                     key,
                     trace,
                     stride=1):
        """Log every stride-th sample of an ObservableTrace as a scalar
        whose step is the sample index"""

        with self.writer.as_default():
            for i in range(0, trace.grid.count, stride):
                tf.summary.scalar(key, float(trace.values[i]), step=i)
        self.writer.flush()
